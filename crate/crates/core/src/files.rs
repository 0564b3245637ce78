//! JSON interchange for lattices, maps, wedge relations, and audit reports.
//!
//! The lattice file is the interchange unit: everything else names its
//! lattice and gets validated against a loaded instance. Loading rebuilds
//! all derived structure from the covers — the file's own claims about order
//! structure are never trusted.

use crate::audit::ClaimReport;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::limits::Limits;
use crate::maps::MonotoneMap;
use crate::poset::Poset;
use crate::wedge::{WedgeKind, WedgeMethod, WedgeRelation};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

/// `{"name": str, "n": int, "covers": [[a,b], ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub name: String,
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

impl LatticeFile {
    pub fn of(l: &Lattice) -> LatticeFile {
        LatticeFile {
            name: l.name().to_string(),
            n: l.n(),
            covers: l.covers().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn build(&self, limits: &Limits) -> Result<Lattice> {
        if self.n > limits.lattice_size {
            return Err(Error::SizeLimitExceeded {
                what: "lattice elements".into(),
                limit: limits.lattice_size,
                needed: self.n,
            });
        }
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        let poset = Poset::build(self.n, &covers)?;
        Ok(Lattice::from_poset(self.name.clone(), poset))
    }
}

/// `{"lattice": name, "image": [int, ...]}`; endomaps only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub lattice: String,
    pub image: Vec<usize>,
}

impl MapFile {
    pub fn of(f: &MonotoneMap) -> Result<MapFile> {
        if !f.is_endo() {
            return Err(Error::InvalidInput("only endomaps have a file form".into()));
        }
        Ok(MapFile {
            lattice: f.dom().name().to_string(),
            image: f.image(),
        })
    }

    pub fn build(&self, l: &Arc<Lattice>) -> Result<MonotoneMap> {
        if self.lattice != l.name() {
            return Err(Error::InvalidInput(format!(
                "map file names lattice '{}', not '{}'",
                self.lattice,
                l.name()
            )));
        }
        MonotoneMap::new(l, l, &self.image)
    }
}

/// `{"lattice": name, "kind": str, "method": str, "pairs": [[x,y], ...]}`
/// with the pairs sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFile {
    pub lattice: String,
    pub kind: String,
    pub method: String,
    pub pairs: Vec<[usize; 2]>,
}

impl RelationFile {
    pub fn of(w: &WedgeRelation) -> RelationFile {
        RelationFile {
            lattice: w.lattice().name().to_string(),
            kind: w.kind().as_str().to_string(),
            method: w.method().as_str().to_string(),
            pairs: w.pairs().iter().map(|&(x, y)| [x, y]).collect(),
        }
    }

    /// Recomputes the relation with the stated method and demands an exact
    /// pair-for-pair match, so a stale or tampered file cannot get through.
    pub fn build(&self, l: &Arc<Lattice>, limits: &Limits) -> Result<WedgeRelation> {
        if self.lattice != l.name() {
            return Err(Error::InvalidInput(format!(
                "relation file names lattice '{}', not '{}'",
                self.lattice,
                l.name()
            )));
        }
        let method = parse_method(&self.method)?;
        let rel = match self.kind.as_str() {
            "wedge" => WedgeRelation::wedge(l, method, limits)?,
            "co" => WedgeRelation::co_wedge(l, method, limits)?,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown relation kind '{other}'"
                )))
            }
        };
        let fresh: Vec<[usize; 2]> = rel.pairs().iter().map(|&(x, y)| [x, y]).collect();
        if fresh != self.pairs {
            return Err(Error::InvalidInput(
                "relation pairs do not match a recomputation".into(),
            ));
        }
        Ok(rel)
    }
}

pub fn parse_method(name: &str) -> Result<WedgeMethod> {
    match name {
        "oracle" => Ok(WedgeMethod::Oracle),
        "fast" => Ok(WedgeMethod::Fast),
        other => Err(Error::InvalidInput(format!(
            "unknown wedge method '{other}'"
        ))),
    }
}

pub fn parse_kind(name: &str) -> Result<WedgeKind> {
    match name {
        "wedge" => Ok(WedgeKind::Wedge),
        "co" => Ok(WedgeKind::CoWedge),
        other => Err(Error::InvalidInput(format!(
            "unknown relation kind '{other}'"
        ))),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-printed with a trailing newline, so identical values give
/// byte-identical files.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn save_lattice(l: &Lattice, path: &Path) -> Result<()> {
    write_json(path, &LatticeFile::of(l))
}

pub fn load_lattice(path: &Path, limits: &Limits) -> Result<Arc<Lattice>> {
    let file: LatticeFile = read_json(path)?;
    Ok(Arc::new(file.build(limits)?))
}

pub fn save_map(f: &MonotoneMap, path: &Path) -> Result<()> {
    write_json(path, &MapFile::of(f)?)
}

pub fn load_map(path: &Path, l: &Arc<Lattice>) -> Result<MonotoneMap> {
    let file: MapFile = read_json(path)?;
    file.build(l)
}

pub fn save_relation(w: &WedgeRelation, path: &Path) -> Result<()> {
    write_json(path, &RelationFile::of(w))
}

pub fn save_reports(reports: &[ClaimReport], path: &Path) -> Result<()> {
    write_json(path, &reports)
}

pub fn load_reports(path: &Path) -> Result<Vec<ClaimReport>> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("qlab-files-{}-{name}", std::process::id()));
        p
    }

    #[test]
    fn lattice_round_trip_is_lossless() {
        let limits = Limits::default();
        for l in [
            Lattice::chain(4).unwrap(),
            Lattice::boolean(3).unwrap(),
            Lattice::diamond_m3(),
            Lattice::pentagon_n5(),
        ] {
            let path = tmp(&format!("rt-{}.json", l.name().replace(['(', ')'], "-")));
            save_lattice(&l, &path).unwrap();
            let back = load_lattice(&path, &limits).unwrap();
            assert_eq!(*back, l);
            assert_eq!(back.name(), l.name());
            std::fs::remove_file(&path).unwrap();
        }
    }

    #[test]
    fn lattice_loader_rejects_bad_covers() {
        let limits = Limits::default();
        let cyclic = LatticeFile {
            name: "broken".into(),
            n: 2,
            covers: vec![[0, 1], [1, 0]],
        };
        assert!(cyclic.build(&limits).is_err());

        let out_of_range = LatticeFile {
            name: "broken".into(),
            n: 2,
            covers: vec![[0, 5]],
        };
        assert!(out_of_range.build(&limits).is_err());

        let oversized = LatticeFile {
            name: "big".into(),
            n: limits.lattice_size + 1,
            covers: vec![],
        };
        match oversized.build(&limits) {
            Err(Error::SizeLimitExceeded { .. }) => {}
            other => panic!("expected a size limit error, got {other:?}"),
        }
    }

    #[test]
    fn map_round_trip_validates_monotonicity_and_name() {
        let l = Arc::new(Lattice::chain(3).unwrap());
        let f = MonotoneMap::new(&l, &l, &[0, 2, 2]).unwrap();
        let path = tmp("map.json");
        save_map(&f, &path).unwrap();
        assert_eq!(load_map(&path, &l).unwrap(), f);

        let other = Arc::new(Lattice::chain(4).unwrap());
        assert!(load_map(&path, &other).is_err());
        std::fs::remove_file(&path).unwrap();

        let non_monotone = MapFile {
            lattice: "chain(3)".into(),
            image: vec![2, 1, 2],
        };
        assert!(non_monotone.build(&l).is_err());
    }

    #[test]
    fn relation_file_rejects_tampered_pairs() {
        let limits = Limits::default();
        let l = Arc::new(Lattice::boolean(2).unwrap());
        let w = WedgeRelation::wedge(&l, WedgeMethod::Fast, &limits).unwrap();
        let mut file = RelationFile::of(&w);
        assert!(file.build(&l, &limits).is_ok());
        file.pairs.pop();
        assert!(file.build(&l, &limits).is_err());
    }

    #[test]
    fn json_files_end_with_one_newline() {
        let l = Lattice::chain(2).unwrap();
        let path = tmp("newline.json");
        save_lattice(&l, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.ends_with('\n') && !text.ends_with("\n\n"));
        std::fs::remove_file(&path).unwrap();
    }
}
