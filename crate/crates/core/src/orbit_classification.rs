//! Frobenius-stable singular-point configurations and their orbits under
//! PGL3(F3).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field_tower::{tower, Fe};
use crate::fixtures::PatternEntry;
use crate::polynomials::{lcm, ProjPoint};
use crate::singularity::{det3, Case, ConfigPoint, SingularConfig};

pub const TABLE_VERSION: u32 = 1;
pub const PGL3_ORDER: usize = 5616;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("representative {0} lies in no orbit of the table")]
    NotFound(String),
    #[error("bad pattern {0}")]
    Pattern(String),
    #[error("orbit table: {0}")]
    Json(#[from] serde_json::Error),
}

/// An invertible 3x3 matrix over GF(3) scaled so its first nonzero entry
/// (row-major) is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub m: [[u8; 3]; 3],
}

impl GroupElement {
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        p.transform(&self.m)
    }

    /// Image of a configuration; multiplicity labels travel with the points.
    pub fn apply_config(&self, c: &SingularConfig) -> SingularConfig {
        SingularConfig {
            case: c.case,
            points: c
                .points
                .iter()
                .map(|cp| ConfigPoint { point: self.apply(&cp.point), multiplicity: cp.multiplicity })
                .collect(),
            label: c.label.clone(),
        }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut m = [[0u8; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = ((0..3).map(|k| self.m[i][k] as u32 * other.m[k][j] as u32).sum::<u32>() % 3) as u8;
            }
        }
        normalize(m)
    }
}

fn det_mod3(m: &[[u8; 3]; 3]) -> u8 {
    let m = m.map(|r| r.map(|v| v as i64));
    let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    d.rem_euclid(3) as u8
}

fn normalize(m: [[u8; 3]; 3]) -> GroupElement {
    let lead = m.iter().flatten().copied().find(|&v| v != 0).expect("nonzero matrix");
    // 2 is its own inverse mod 3
    GroupElement { m: m.map(|r| r.map(|v| v * lead % 3)) }
}

/// All 5616 elements of PGL3(F3), identity first.
pub fn pgl3() -> &'static [GroupElement] {
    static CELL: OnceLock<Vec<GroupElement>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::with_capacity(PGL3_ORDER);
        for code in 0..3u32.pow(9) {
            let mut m = [[0u8; 3]; 3];
            let mut c = code;
            for v in m.iter_mut().flatten() {
                *v = (c % 3) as u8;
                c /= 3;
            }
            if det_mod3(&m) == 0 || m.iter().flatten().copied().find(|&v| v != 0) != Some(1) {
                continue;
            }
            out.push(GroupElement { m });
        }
        let id = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let pos = out.iter().position(|g| g.m == id).unwrap();
        out.swap(0, pos);
        assert_eq!(out.len(), PGL3_ORDER);
        out
    })
}

/// One point from each Frobenius orbit of points of exact degree `d`
/// (the least point of the orbit).
pub fn points_of_degree(d: usize) -> Vec<ProjPoint> {
    let gf = tower().field(d);
    let elems: Vec<Fe> = gf.elements().collect();
    let mut out = Vec::new();
    let mut consider = |c: [Fe; 3]| {
        if c.iter().map(|&v| gf.element_degree(v)).fold(1, lcm) != d {
            return;
        }
        let p = ProjPoint::new(d, c).unwrap();
        if p.conjugates().iter().all(|q| p <= *q) {
            out.push(p);
        }
    };
    for &a in &elems {
        for &b in &elems {
            consider([Fe::ONE, a, b]);
        }
        consider([Fe::ZERO, Fe::ONE, a]);
    }
    consider([Fe::ZERO, Fe::ZERO, Fe::ONE]);
    out.sort();
    out
}

fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, items[i].clone());
            out.push(rest);
        }
    }
    out
}

/// Parses `1,2,2`, `(1,2,2)` or `5`.
pub fn parse_pattern(text: &str) -> Result<Vec<usize>, ClassifyError> {
    let s = text.trim().trim_start_matches('(').trim_end_matches(')');
    let mut v = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| ClassifyError::Pattern(text.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    v.sort();
    if v.is_empty() || v.contains(&0) {
        return Err(ClassifyError::Pattern(text.to_string()));
    }
    Ok(v)
}

/// Every Frobenius-stable configuration whose double points have the given
/// orbit pattern, in general position. Case II adds a rational triple point.
pub fn enumerate_configs(case: Case, pattern: &[usize]) -> Result<Vec<SingularConfig>, ClassifyError> {
    let total: usize = pattern.iter().sum();
    let expected = match case {
        Case::I => 5,
        Case::II => 2,
    };
    if total != expected || pattern.iter().any(|&d| d > 5) {
        return Err(ClassifyError::Pattern(format!("{pattern:?} for case {case}")));
    }
    let mut by_degree: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in pattern {
        *by_degree.entry(d).or_default() += 1;
    }
    let mut choices: Vec<Vec<ProjPoint>> = vec![vec![]];
    for (&d, &count) in &by_degree {
        let pts = points_of_degree(d);
        let combos = combinations(&pts, count);
        choices = choices
            .iter()
            .flat_map(|prefix| {
                combos.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend(c.iter().copied());
                    v
                })
            })
            .collect();
    }
    let triples: Vec<Option<ProjPoint>> = match case {
        Case::I => vec![None],
        Case::II => points_of_degree(1).into_iter().map(Some).collect(),
    };
    let mut out = Vec::new();
    for t in &triples {
        for doubles in &choices {
            let mut reps: Vec<(ProjPoint, u32)> = Vec::new();
            if let Some(p) = t {
                if doubles.contains(p) {
                    continue;
                }
                reps.push((*p, 3));
            }
            reps.extend(doubles.iter().map(|&p| (p, 2)));
            let c = SingularConfig::from_orbits_unchecked(case, &reps, "");
            if c.validate().is_ok() {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Sorted point list used as an orbit key.
pub fn config_key(c: &SingularConfig) -> Vec<ConfigPoint> {
    let mut v = c.points.clone();
    v.sort();
    v
}

/// Least key over the PGL3(F3)-orbit of `c`.
pub fn canonical_key(c: &SingularConfig) -> Vec<ConfigPoint> {
    pgl3().iter().map(|g| config_key(&g.apply_config(c))).min().unwrap()
}

fn key_to_config(case: Case, key: &[ConfigPoint]) -> SingularConfig {
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for cp in key {
        if seen.insert(cp.point) {
            seen.extend(cp.point.conjugates());
            reps.push((cp.point, cp.multiplicity));
        }
    }
    // triple point first, then by orbit size
    reps.sort_by_key(|(p, m)| (std::cmp::Reverse(*m), p.field_degree(), *p));
    SingularConfig::from_orbits_unchecked(case, &reps, "")
}

/// `dep` if the three rational double points of a (1,1,1,2) configuration
/// are collinear, `indep` otherwise; `None` for other patterns.
pub fn subclass(c: &SingularConfig) -> Option<&'static str> {
    if c.case != Case::I || c.pattern() != [1, 1, 1, 2] {
        return None;
    }
    let rational: Vec<[Fe; 3]> = c.points.iter().filter(|p| p.point.field_degree() == 1).map(|p| p.point.coords()).collect();
    let d = det3(tower().field(1), &rational[0], &rational[1], &rational[2]);
    Some(if d.is_zero() { "dep" } else { "indep" })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    /// Canonical (least) representative, orbit representatives of points.
    pub representative: String,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subclass: Option<String>,
    /// Listed representatives falling in this orbit, as `selector #i`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub listed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTable {
    pub version: u32,
    pub case: Case,
    pub pattern: String,
    pub configs_total: usize,
    pub orbits: Vec<OrbitEntry>,
}

impl OrbitTable {
    pub fn representative(&self, index: usize) -> SingularConfig {
        SingularConfig::parse(self.case, &self.orbits[index].representative, "").expect("table representative parses")
    }

    /// Number of orbits carrying the given subclass tag (all orbits for `None`).
    pub fn count(&self, subclass: Option<&str>) -> usize {
        self.orbits.iter().filter(|o| subclass.is_none() || o.subclass.as_deref() == subclass).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<OrbitTable, ClassifyError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Splits `configs` (closed under the group) into orbits.
pub fn orbit_decompose(case: Case, pattern: &str, configs: &[SingularConfig], group: &[GroupElement]) -> OrbitTable {
    let mut visited: HashSet<Vec<ConfigPoint>> = HashSet::with_capacity(configs.len());
    let mut orbits = Vec::new();
    for c in configs {
        let key = config_key(c);
        if visited.contains(&key) {
            continue;
        }
        let images: Vec<Vec<ConfigPoint>> = group.iter().map(|g| config_key(&g.apply_config(c))).collect();
        let stabilizer_order = images.iter().filter(|k| **k == key).count();
        let orbit: BTreeSet<Vec<ConfigPoint>> = images.into_iter().collect();
        let least = orbit.iter().next().unwrap().clone();
        let rep = key_to_config(case, &least);
        orbits.push(OrbitEntry {
            representative: rep.points_text(),
            orbit_size: orbit.len(),
            stabilizer_order,
            subclass: subclass(&rep).map(str::to_string),
            listed: Vec::new(),
        });
        visited.extend(orbit);
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    OrbitTable { version: TABLE_VERSION, case, pattern: pattern.to_string(), configs_total: configs.len(), orbits }
}

/// Index of the orbit containing `rep`.
pub fn locate_paper_representative(rep: &SingularConfig, table: &OrbitTable) -> Result<usize, ClassifyError> {
    let target = key_to_config(rep.case, &canonical_key(rep)).points_text();
    table
        .orbits
        .iter()
        .position(|o| o.representative == target)
        .ok_or_else(|| ClassifyError::NotFound(rep.points_text()))
}

/// Full classification of one pattern, with the listed representatives of
/// every matching fixture entry located in the table.
pub fn classify(case: Case, pattern: &[usize]) -> Result<OrbitTable, ClassifyError> {
    let tag = pattern.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    let configs = enumerate_configs(case, pattern)?;
    let mut table = orbit_decompose(case, &tag, &configs, pgl3());
    for entry in crate::fixtures::orbit_patterns().patterns.iter().filter(|p| p.case == case && p.tag == tag) {
        annotate(&mut table, entry)?;
    }
    Ok(table)
}

fn annotate(table: &mut OrbitTable, entry: &PatternEntry) -> Result<(), ClassifyError> {
    for i in 1..=entry.reps.len() {
        let rep = entry.representative(i).expect("listed");
        let idx = locate_paper_representative(&rep, table)?;
        table.orbits[idx].listed.push(format!("{} #{i}", entry.selector()));
    }
    Ok(())
}
