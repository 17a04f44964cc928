//! Graph sources: generator specs or edge-list files.
//!
//! A generator spec is `name:key=value,...`, optionally followed by one or
//! more `+plant:k=<k>,seed=<s>` suffixes that plant a clique on random
//! vertices of the graph built so far.
//!
//! | spec | graph |
//! |------|-------|
//! | `er:n=60,p=0.3,seed=1` | Erdős–Rényi `G(n, p)` |
//! | `forest:n=200,alpha=2,seed=1` | union of `alpha` random spanning forests |
//! | `clique:k=6` | `K_k` |
//! | `path:n=10` | path on `n` vertices |
//! | `star:n=10` | star with `n − 1` leaves |
//! | `lb1:n=40,advice=3,t=216,seed=1` | lower-bound family, triangle-free kind |
//! | `lb2:n=40,advice=3,t=216,seed=1` | lower-bound family, clique kind |
//!
//! Anything without a recognised `name:` prefix is read as an edge-list path.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use arbor_core::generators::{
    gen_clique, gen_er, gen_forest_union, gen_lower_bound_family, gen_path, gen_planted_clique, gen_star,
    CliquePlacement, LowerBoundKind,
};
use arbor_core::Graph;
use thiserror::Error;

use crate::io::{load_edge_list, LoadError};

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("graph spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },
    #[error(transparent)]
    Load(#[from] LoadError),
}

impl SourceError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SourceError::Spec { .. } => 3,
            SourceError::Load(e) => e.exit_code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Er { n: usize, p: f64, seed: u64 },
    Forest { n: usize, alpha: u32, seed: u64 },
    Clique { k: usize },
    Path { n: usize },
    Star { n: usize },
    LowerBound { kind: LowerBoundKind, n: usize, advice: u32, t: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plant {
    pub k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Generated { base: Generator, plants: Vec<Plant> },
    File(PathBuf),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Er { n, p, seed } => write!(f, "er:n={n},p={p},seed={seed}"),
            Generator::Forest { n, alpha, seed } => write!(f, "forest:n={n},alpha={alpha},seed={seed}"),
            Generator::Clique { k } => write!(f, "clique:k={k}"),
            Generator::Path { n } => write!(f, "path:n={n}"),
            Generator::Star { n } => write!(f, "star:n={n}"),
            Generator::LowerBound { kind, n, advice, t, seed } => {
                let name = match kind {
                    LowerBoundKind::One => "lb1",
                    LowerBoundKind::Two => "lb2",
                };
                write!(f, "{name}:n={n},advice={advice},t={t},seed={seed}")
            }
        }
    }
}

/// Canonical form, used as the graph id in result rows.
impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(path) => write!(f, "{}", path.display()),
            GraphSource::Generated { base, plants } => {
                write!(f, "{base}")?;
                for p in plants {
                    write!(f, "+plant:k={},seed={}", p.k, p.seed)?;
                }
                Ok(())
            }
        }
    }
}

const GENERATORS: [&str; 7] = ["er", "forest", "clique", "path", "star", "lb1", "lb2"];

struct Fields<'a> {
    spec: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self, SourceError> {
        let mut map = BTreeMap::new();
        for kv in body.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(spec, format!("`{kv}` is not key=value")))?;
            if map.insert(k.trim(), v.trim()).is_some() {
                return Err(bad(spec, format!("key `{}` given twice", k.trim())));
            }
        }
        Ok(Fields { spec, map })
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Result<T, SourceError> {
        let raw = self
            .map
            .remove(key)
            .ok_or_else(|| bad(self.spec, format!("missing `{key}`")))?;
        raw.parse()
            .map_err(|_| bad(self.spec, format!("`{key}={raw}` is not valid")))
    }

    fn get_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, SourceError> {
        if self.map.contains_key(key) {
            self.get(key)
        } else {
            Ok(default)
        }
    }

    fn finish(self) -> Result<(), SourceError> {
        match self.map.keys().next() {
            Some(k) => Err(bad(self.spec, format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

fn bad(spec: &str, reason: String) -> SourceError {
    SourceError::Spec {
        spec: spec.to_string(),
        reason,
    }
}

fn parse_generator(spec: &str, name: &str, body: &str) -> Result<Generator, SourceError> {
    let mut f = Fields::parse(spec, body)?;
    let g = match name {
        "er" => Generator::Er {
            n: f.get("n")?,
            p: f.get("p")?,
            seed: f.get_or("seed", 0)?,
        },
        "forest" => Generator::Forest {
            n: f.get("n")?,
            alpha: f.get("alpha")?,
            seed: f.get_or("seed", 0)?,
        },
        "clique" => Generator::Clique { k: f.get("k")? },
        "path" => Generator::Path { n: f.get("n")? },
        "star" => Generator::Star { n: f.get("n")? },
        "lb1" | "lb2" => Generator::LowerBound {
            kind: if name == "lb1" { LowerBoundKind::One } else { LowerBoundKind::Two },
            n: f.get("n")?,
            advice: f.get("advice")?,
            t: f.get("t")?,
            seed: f.get_or("seed", 0)?,
        },
        _ => unreachable!("caller checks the generator name"),
    };
    f.finish()?;
    Ok(g)
}

impl FromStr for GraphSource {
    type Err = SourceError;

    fn from_str(spec: &str) -> Result<Self, SourceError> {
        let spec = spec.trim();
        let mut parts = spec.split('+');
        let head = parts.next().unwrap_or("");
        let Some((name, body)) = head.split_once(':').filter(|(name, _)| GENERATORS.contains(name)) else {
            return Ok(GraphSource::File(PathBuf::from(spec)));
        };
        let base = parse_generator(spec, name, body)?;
        let mut plants = Vec::new();
        for part in parts {
            let body = part
                .strip_prefix("plant:")
                .ok_or_else(|| bad(spec, format!("`{part}` is not a `plant:` suffix")))?;
            let mut f = Fields::parse(spec, body)?;
            plants.push(Plant {
                k: f.get("k")?,
                seed: f.get_or("seed", 0)?,
            });
            f.finish()?;
        }
        Ok(GraphSource::Generated { base, plants })
    }
}

impl Generator {
    pub fn build(&self) -> Result<Graph, String> {
        let g = match *self {
            Generator::Er { n, p, seed } => gen_er(n, p, seed).map_err(|e| e.to_string())?,
            Generator::Forest { n, alpha, seed } => gen_forest_union(n, alpha, seed).map_err(|e| e.to_string())?,
            Generator::Clique { k } => gen_clique(k),
            Generator::Path { n } => gen_path(n),
            Generator::Star { n } => gen_star(n),
            Generator::LowerBound { kind, n, advice, t, seed } => {
                gen_lower_bound_family(kind, n, advice, t, seed)
                    .map_err(|e| e.to_string())?
                    .graph
            }
        };
        Ok(g)
    }
}

impl GraphSource {
    pub fn build(&self) -> Result<Graph, SourceError> {
        match self {
            GraphSource::File(path) => Ok(load_edge_list(path)?),
            GraphSource::Generated { base, plants } => {
                let spec = self.to_string();
                let mut g = base.build().map_err(|r| bad(&spec, r))?;
                for p in plants {
                    g = gen_planted_clique(&g, p.k, CliquePlacement::Random, p.seed)
                        .map_err(|e| bad(&spec, e.to_string()))?
                        .graph;
                }
                Ok(g)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        for spec in [
            "er:n=30,p=0.3,seed=4",
            "forest:n=100,alpha=2,seed=7+plant:k=6,seed=1+plant:k=4,seed=2",
            "clique:k=5",
            "path:n=9",
            "star:n=9",
            "lb2:n=40,advice=3,t=216,seed=1",
        ] {
            let src: GraphSource = spec.parse().unwrap();
            assert_eq!(src.to_string(), spec);
        }
    }

    #[test]
    fn defaults_and_whitespace() {
        let src: GraphSource = "er: n=10, p=0.5".parse().unwrap();
        assert_eq!(src.to_string(), "er:n=10,p=0.5,seed=0");
    }

    #[test]
    fn other_strings_are_paths() {
        let src: GraphSource = "graphs/web.txt".parse().unwrap();
        assert_eq!(src, GraphSource::File("graphs/web.txt".into()));
    }

    #[test]
    fn bad_specs_are_parameter_errors() {
        for spec in ["er:n=10", "clique:k=x", "clique:k=3,z=1", "path:n=3+star:n=3", "er:n=5,p=2"] {
            let err = spec.parse::<GraphSource>().and_then(|s| s.build()).unwrap_err();
            assert_eq!(err.exit_code(), 3, "{spec}: {err}");
        }
    }

    #[test]
    fn planting_adds_triangles() {
        let src: GraphSource = "path:n=20+plant:k=5,seed=3".parse().unwrap();
        let g = src.build().unwrap();
        assert_eq!(g.n(), 20);
        assert!(arbor_core::exact::triangle_count(&g) >= 10);
    }
}
