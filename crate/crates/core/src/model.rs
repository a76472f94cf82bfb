//! Instances and matchings.
//!
//! Residents and hospitals are addressed by dense indices; the string ids are kept only for
//! documents and traces. Preferences are weak orders stored as tie-groups, best group first.

use crate::error::{Error, Result};
use std::collections::HashMap;

pub type Resident = usize;
pub type Hospital = usize;

/// Rank value for "not acceptable".
pub const UNRANKED: u32 = u32::MAX;

/// A hospital either ranks its acceptable residents or is indifferent among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HospitalPrefs {
    Ranked(Vec<Vec<Resident>>),
    Indifferent(Vec<Resident>),
}

impl HospitalPrefs {
    pub fn groups(&self) -> Vec<Vec<Resident>> {
        match self {
            HospitalPrefs::Ranked(g) => g.clone(),
            HospitalPrefs::Indifferent(a) if a.is_empty() => Vec::new(),
            HospitalPrefs::Indifferent(a) => vec![a.clone()],
        }
    }

    pub fn accepted(&self) -> Vec<Resident> {
        match self {
            HospitalPrefs::Ranked(g) => g.iter().flatten().copied().collect(),
            HospitalPrefs::Indifferent(a) => a.clone(),
        }
    }

    pub fn is_indifferent(&self) -> bool {
        matches!(self, HospitalPrefs::Indifferent(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    residents: Vec<String>,
    hospitals: Vec<String>,
    lower: Vec<usize>,
    upper: Vec<Option<usize>>,
    resident_prefs: Vec<Vec<Vec<Hospital>>>,
    hospital_prefs: Vec<HospitalPrefs>,
    // Dense rank tables, first occurrence wins on duplicates.
    r_rank: Vec<Vec<u32>>,
    h_rank: Vec<Vec<u32>>,
}

impl Instance {
    /// Builds an instance from index-based parts. Only structural problems (length mismatches,
    /// indices out of range) are errors here; model invariants are reported by
    /// [`crate::stability::validate_instance`].
    pub fn new(
        residents: Vec<String>,
        hospitals: Vec<String>,
        lower: Vec<usize>,
        upper: Vec<Option<usize>>,
        resident_prefs: Vec<Vec<Vec<Hospital>>>,
        hospital_prefs: Vec<HospitalPrefs>,
    ) -> Result<Self> {
        let n = residents.len();
        let m = hospitals.len();
        if lower.len() != m || upper.len() != m || hospital_prefs.len() != m {
            return Err(Error::RejectedInput(
                "hospital quota/preference tables do not match the hospital count".into(),
            ));
        }
        if resident_prefs.len() != n {
            return Err(Error::RejectedInput(
                "resident preference table does not match the resident count".into(),
            ));
        }
        let mut r_rank = vec![vec![UNRANKED; m]; n];
        for (r, groups) in resident_prefs.iter().enumerate() {
            for (t, g) in groups.iter().enumerate() {
                for &h in g {
                    if h >= m {
                        return Err(Error::RejectedInput(format!(
                            "resident {} lists unknown hospital index {h}",
                            residents[r]
                        )));
                    }
                    if r_rank[r][h] == UNRANKED {
                        r_rank[r][h] = t as u32;
                    }
                }
            }
        }
        let mut h_rank = vec![vec![UNRANKED; n]; m];
        for (h, p) in hospital_prefs.iter().enumerate() {
            for (t, g) in p.groups().iter().enumerate() {
                for &r in g {
                    if r >= n {
                        return Err(Error::RejectedInput(format!(
                            "hospital {} lists unknown resident index {r}",
                            hospitals[h]
                        )));
                    }
                    if h_rank[h][r] == UNRANKED {
                        h_rank[h][r] = t as u32;
                    }
                }
            }
        }
        Ok(Instance {
            residents,
            hospitals,
            lower,
            upper,
            resident_prefs,
            hospital_prefs,
            r_rank,
            h_rank,
        })
    }

    pub fn builder() -> InstanceBuilder {
        InstanceBuilder::default()
    }

    pub fn n(&self) -> usize {
        self.residents.len()
    }

    pub fn m(&self) -> usize {
        self.hospitals.len()
    }

    pub fn resident_name(&self, r: Resident) -> &str {
        &self.residents[r]
    }

    pub fn hospital_name(&self, h: Hospital) -> &str {
        &self.hospitals[h]
    }

    pub fn resident_names(&self) -> &[String] {
        &self.residents
    }

    pub fn hospital_names(&self) -> &[String] {
        &self.hospitals
    }

    pub fn resident_index(&self, name: &str) -> Option<Resident> {
        self.residents.iter().position(|x| x == name)
    }

    pub fn hospital_index(&self, name: &str) -> Option<Hospital> {
        self.hospitals.iter().position(|x| x == name)
    }

    pub fn lower(&self, h: Hospital) -> usize {
        self.lower[h]
    }

    /// `None` means unbounded.
    pub fn upper(&self, h: Hospital) -> Option<usize> {
        self.upper[h]
    }

    /// Upper quota as a number; unbounded compares as n+1.
    pub fn cap(&self, h: Hospital) -> usize {
        self.upper[h].unwrap_or(self.n() + 1)
    }

    pub fn resident_prefs(&self, r: Resident) -> &[Vec<Hospital>] {
        &self.resident_prefs[r]
    }

    pub fn hospital_prefs(&self, h: Hospital) -> &HospitalPrefs {
        &self.hospital_prefs[h]
    }

    /// Resident's acceptable hospitals, best first, ties in listed order.
    pub fn resident_list(&self, r: Resident) -> Vec<Hospital> {
        self.resident_prefs[r].iter().flatten().copied().collect()
    }

    /// Hospital's acceptable residents, best first, ties in listed order.
    pub fn acceptors(&self, h: Hospital) -> Vec<Resident> {
        self.hospital_prefs[h].accepted()
    }

    /// Tie-group index of `h` in `r`'s list, or [`UNRANKED`].
    pub fn r_rank(&self, r: Resident, h: Hospital) -> u32 {
        self.r_rank[r][h]
    }

    /// Tie-group index of `r` in `h`'s list, or [`UNRANKED`]. Indifferent hospitals rank every
    /// accepted resident 0.
    pub fn h_rank(&self, h: Hospital, r: Resident) -> u32 {
        self.h_rank[h][r]
    }

    pub fn mutually_acceptable(&self, r: Resident, h: Hospital) -> bool {
        self.r_rank[r][h] != UNRANKED && self.h_rank[h][r] != UNRANKED
    }

    /// True iff `r` strictly prefers `h` to `current` (unmatched ranks below everything).
    pub fn prefers(&self, r: Resident, h: Hospital, current: Option<Hospital>) -> bool {
        let a = self.r_rank[r][h];
        if a == UNRANKED {
            return false;
        }
        match current {
            None => true,
            Some(c) => a < self.r_rank[r][c],
        }
    }

    pub fn has_resident_ties(&self) -> bool {
        self.resident_prefs.iter().flatten().any(|g| g.len() > 1)
    }

    pub fn has_hospital_ties(&self) -> bool {
        self.hospital_prefs.iter().any(|p| match p {
            HospitalPrefs::Ranked(g) => g.iter().any(|x| x.len() > 1),
            HospitalPrefs::Indifferent(_) => false,
        })
    }

    pub fn any_indifferent(&self) -> bool {
        self.hospital_prefs
            .iter()
            .any(HospitalPrefs::is_indifferent)
    }

    /// No ties anywhere and every hospital ranks its residents.
    pub fn is_strict(&self) -> bool {
        !self.has_resident_ties() && !self.has_hospital_ties() && !self.any_indifferent()
    }

    pub fn all_unbounded(&self) -> bool {
        self.upper.iter().all(Option::is_none)
    }

    pub fn max_lower(&self) -> usize {
        self.lower.iter().copied().max().unwrap_or(0)
    }

    /// Hospitals whose lower quota is at least two.
    pub fn quota_hospitals(&self) -> Vec<Hospital> {
        (0..self.m()).filter(|&h| self.lower[h] >= 2).collect()
    }

    /// Copy of the instance with a single quota changed (test convenience).
    pub fn with_quota(&self, h: Hospital, lower: usize, upper: Option<usize>) -> Instance {
        let mut l = self.lower.clone();
        let mut u = self.upper.clone();
        l[h] = lower;
        u[h] = upper;
        Instance::new(
            self.residents.clone(),
            self.hospitals.clone(),
            l,
            u,
            self.resident_prefs.clone(),
            self.hospital_prefs.clone(),
        )
        .expect("same structure")
    }

    /// Copy with every hospital made indifferent over its accepted residents.
    pub fn as_house_allocation(&self) -> Instance {
        let hp = self
            .hospital_prefs
            .iter()
            .map(|p| HospitalPrefs::Indifferent(p.accepted()))
            .collect();
        self.with_hospital_prefs(hp)
    }

    pub fn with_hospital_prefs(&self, hospital_prefs: Vec<HospitalPrefs>) -> Instance {
        Instance::new(
            self.residents.clone(),
            self.hospitals.clone(),
            self.lower.clone(),
            self.upper.clone(),
            self.resident_prefs.clone(),
            hospital_prefs,
        )
        .expect("same structure")
    }

    /// Builds a matching from `(hospital name, resident names)` groups.
    pub fn matching(&self, groups: &[(&str, &[&str])]) -> Result<Matching> {
        let mut m = Matching::empty(self.n());
        for (h, rs) in groups {
            let hi = self
                .hospital_index(h)
                .ok_or_else(|| Error::RejectedInput(format!("unknown hospital {h}")))?;
            for r in *rs {
                let ri = self
                    .resident_index(r)
                    .ok_or_else(|| Error::RejectedInput(format!("unknown resident {r}")))?;
                m.assignment[ri] = Some(hi);
            }
        }
        Ok(m)
    }
}

/// Name-based construction used by fixtures, generators and tests.
///
/// Hospitals without explicit preferences get a strict list of their acceptors in resident
/// order, which is the convention for instances where hospital preferences do not matter.
#[derive(Debug, Default, Clone)]
pub struct InstanceBuilder {
    hospitals: Vec<(String, usize, Option<usize>)>,
    residents: Vec<(String, Vec<Vec<String>>)>,
    hospital_prefs: HashMap<String, Option<Vec<Vec<String>>>>,
}

impl InstanceBuilder {
    pub fn hospital(mut self, id: &str, lower: usize, upper: Option<usize>) -> Self {
        self.hospitals.push((id.to_string(), lower, upper));
        self
    }

    /// Strict resident list.
    pub fn resident(self, id: &str, prefs: &[&str]) -> Self {
        let groups: Vec<Vec<&str>> = prefs.iter().map(|h| vec![*h]).collect();
        let refs: Vec<&[&str]> = groups.iter().map(|g| g.as_slice()).collect();
        self.resident_ties(id, &refs)
    }

    pub fn resident_ties(mut self, id: &str, groups: &[&[&str]]) -> Self {
        self.residents.push((
            id.to_string(),
            groups
                .iter()
                .map(|g| g.iter().map(|s| s.to_string()).collect())
                .collect(),
        ));
        self
    }

    pub fn hospital_prefs(self, id: &str, prefs: &[&str]) -> Self {
        let groups: Vec<Vec<&str>> = prefs.iter().map(|r| vec![*r]).collect();
        let refs: Vec<&[&str]> = groups.iter().map(|g| g.as_slice()).collect();
        self.hospital_ties(id, &refs)
    }

    pub fn hospital_ties(mut self, id: &str, groups: &[&[&str]]) -> Self {
        self.hospital_prefs.insert(
            id.to_string(),
            Some(
                groups
                    .iter()
                    .map(|g| g.iter().map(|s| s.to_string()).collect())
                    .collect(),
            ),
        );
        self
    }

    /// Marks a hospital indifferent over the residents listing it.
    pub fn indifferent(mut self, id: &str) -> Self {
        self.hospital_prefs.insert(id.to_string(), None);
        self
    }

    pub fn build(self) -> Result<Instance> {
        let hidx: HashMap<&str, usize> = self
            .hospitals
            .iter()
            .enumerate()
            .map(|(i, h)| (h.0.as_str(), i))
            .collect();
        let ridx: HashMap<&str, usize> = self
            .residents
            .iter()
            .enumerate()
            .map(|(i, r)| (r.0.as_str(), i))
            .collect();
        let mut rprefs = Vec::with_capacity(self.residents.len());
        let mut acceptors: Vec<Vec<usize>> = vec![Vec::new(); self.hospitals.len()];
        for (r, (rid, groups)) in self.residents.iter().enumerate() {
            let mut gs = Vec::new();
            for g in groups {
                let mut out = Vec::new();
                for h in g {
                    let hi = *hidx.get(h.as_str()).ok_or_else(|| {
                        Error::RejectedInput(format!("resident {rid} lists unknown hospital {h}"))
                    })?;
                    out.push(hi);
                    acceptors[hi].push(r);
                }
                gs.push(out);
            }
            rprefs.push(gs);
        }
        let mut hprefs = Vec::with_capacity(self.hospitals.len());
        for (h, (hid, _, _)) in self.hospitals.iter().enumerate() {
            let p = match self.hospital_prefs.get(hid) {
                Some(Some(groups)) => {
                    let mut gs = Vec::new();
                    for g in groups {
                        let mut out = Vec::new();
                        for r in g {
                            out.push(*ridx.get(r.as_str()).ok_or_else(|| {
                                Error::RejectedInput(format!(
                                    "hospital {hid} lists unknown resident {r}"
                                ))
                            })?);
                        }
                        gs.push(out);
                    }
                    HospitalPrefs::Ranked(gs)
                }
                Some(None) => HospitalPrefs::Indifferent(acceptors[h].clone()),
                None => HospitalPrefs::Ranked(acceptors[h].iter().map(|&r| vec![r]).collect()),
            };
            hprefs.push(p);
        }
        Instance::new(
            self.residents.iter().map(|r| r.0.clone()).collect(),
            self.hospitals.iter().map(|h| h.0.clone()).collect(),
            self.hospitals.iter().map(|h| h.1).collect(),
            self.hospitals.iter().map(|h| h.2).collect(),
            rprefs,
            hprefs,
        )
    }
}

/// Assignment of residents to at most one hospital each. Ordered lexicographically on the
/// assignment vector with unmatched below every hospital.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    pub assignment: Vec<Option<Hospital>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            assignment: vec![None; n],
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(Resident, Hospital)]) -> Self {
        let mut m = Matching::empty(n);
        for &(r, h) in pairs {
            m.assignment[r] = Some(h);
        }
        m
    }

    pub fn hospital_of(&self, r: Resident) -> Option<Hospital> {
        self.assignment[r]
    }

    pub fn residents_of(&self, h: Hospital) -> Vec<Resident> {
        (0..self.assignment.len())
            .filter(|&r| self.assignment[r] == Some(h))
            .collect()
    }

    pub fn counts(&self, m: usize) -> Vec<usize> {
        let mut c = vec![0; m];
        for &h in self.assignment.iter().flatten() {
            if h < m {
                c[h] += 1;
            }
        }
        c
    }

    pub fn open_hospitals(&self, m: usize) -> Vec<Hospital> {
        self.counts(m)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(h, _)| h)
            .collect()
    }

    pub fn matched_residents(&self) -> Vec<Resident> {
        (0..self.assignment.len())
            .filter(|&r| self.assignment[r].is_some())
            .collect()
    }

    pub fn pairs(&self) -> Vec<(Resident, Hospital)> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(r, h)| h.map(|h| (r, h)))
            .collect()
    }

    pub fn size(&self) -> usize {
        self.assignment.iter().flatten().count()
    }
}
