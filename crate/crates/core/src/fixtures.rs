//! Curves and orbit tables shipped in `data/`, parsed once.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::point_counting::WeilPoly;
use crate::polynomials::TernaryForm;
use crate::singularity::{Case, SingularConfig};

const CURVES: &str = include_str!("../data/curves.toml");
const ORBITS: &str = include_str!("../data/orbits.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct CurveFixture {
    pub name: String,
    pub pattern: String,
    pub sextic: String,
    pub config: String,
    pub n1: i64,
    pub weil: String,
}

impl CurveFixture {
    pub fn form(&self) -> TernaryForm {
        TernaryForm::parse(&self.sextic, 1).expect("fixture sextic parses")
    }

    pub fn singular_config(&self) -> SingularConfig {
        SingularConfig::parse(Case::I, &self.config, &self.name).expect("fixture config is valid")
    }

    pub fn weil_poly(&self) -> WeilPoly {
        WeilPoly::parse(&self.weil).expect("fixture Weil polynomial parses")
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct CurveFile {
    pub weil_classes: Vec<String>,
    #[serde(rename = "curve")]
    pub curves: Vec<CurveFixture>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PatternEntry {
    pub case: Case,
    pub tag: String,
    #[serde(default)]
    pub subclass: Option<String>,
    pub orbits: usize,
    pub reps: Vec<String>,
    #[serde(default)]
    pub b_values: Option<Vec<[u8; 3]>>,
}

impl PatternEntry {
    /// Command-line name, e.g. `1,1,1,2-indep` or `1,1` for case II.
    pub fn selector(&self) -> String {
        match &self.subclass {
            Some(s) => format!("{}-{}", self.tag, s),
            None => self.tag.clone(),
        }
    }

    /// Listed representative number `index` (1-based) as a configuration.
    pub fn representative(&self, index: usize) -> Option<SingularConfig> {
        let text = self.reps.get(index.checked_sub(1)?)?;
        let label = format!("{} #{}", self.selector(), index);
        Some(SingularConfig::parse(self.case, text, &label).expect("listed representative is valid"))
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct OrbitFile {
    pub version: u32,
    #[serde(rename = "pattern")]
    pub patterns: Vec<PatternEntry>,
}

impl OrbitFile {
    pub fn find(&self, case: Case, selector: &str) -> Option<&PatternEntry> {
        let sel = selector.trim().trim_start_matches('(').trim_end_matches(')').replace(' ', "");
        self.patterns.iter().find(|p| p.case == case && p.selector() == sel)
    }
}

pub fn curves() -> &'static CurveFile {
    static CELL: OnceLock<CurveFile> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(CURVES).expect("data/curves.toml is well formed"))
}

pub fn orbit_patterns() -> &'static OrbitFile {
    static CELL: OnceLock<OrbitFile> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(ORBITS).expect("data/orbits.toml is well formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_files_load() {
        let c = curves();
        assert_eq!(c.curves.len(), 7);
        assert_eq!(c.weil_classes.len(), 4);
        for f in &c.curves {
            assert_eq!(f.form().degree(), 6);
            assert_eq!(f.singular_config().points.len(), 5, "{}", f.name);
            f.weil_poly();
        }
        let o = orbit_patterns();
        for p in &o.patterns {
            assert_eq!(p.reps.len(), p.orbits, "{}", p.selector());
            for i in 1..=p.reps.len() {
                let cfg = p.representative(i).unwrap();
                assert_eq!(cfg.pattern_tag(), p.tag);
            }
        }
        assert!(o.find(Case::I, "(1,2,2)").is_some());
        assert!(o.find(Case::II, "2").is_some());
    }
}
