//! Feasibility and weak stability.

use crate::error::{Error, Result};
use crate::model::{Hospital, HospitalPrefs, Instance, Matching, Resident, UNRANKED};
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub feasible: bool,
    pub blocking_pairs: Vec<(Resident, Hospital)>,
    /// One witness per blocked closed hospital: the `l(h)` smallest residents that strictly
    /// prefer it to their assignment.
    pub blocked_closed_hospitals: Vec<(Hospital, Vec<Resident>)>,
    pub stable: bool,
}

/// Lists every broken model invariant; empty iff the instance is well formed.
pub fn validate_instance(inst: &Instance) -> Vec<String> {
    let mut out = Vec::new();
    for h in 0..inst.m() {
        let name = inst.hospital_name(h);
        if inst.lower(h) < 1 {
            out.push(format!("l<1 at {name}"));
        }
        if let Some(u) = inst.upper(h) {
            if inst.lower(h) > u {
                out.push(format!("l>u at {name}"));
            }
        }
        let listed = inst.hospital_prefs(h).accepted();
        let mut seen = HashSet::new();
        for &r in &listed {
            if !seen.insert(r) {
                out.push(format!(
                    "duplicate {} in preferences of {name}",
                    inst.resident_name(r)
                ));
            }
        }
        if let HospitalPrefs::Ranked(groups) = inst.hospital_prefs(h) {
            if groups.iter().any(Vec::is_empty) {
                out.push(format!("empty tie-group in preferences of {name}"));
            }
        }
        for &r in &seen {
            if inst.r_rank(r, h) == UNRANKED {
                out.push(format!(
                    "asymmetry: {name} lists {} but {} does not list {name}",
                    inst.resident_name(r),
                    inst.resident_name(r)
                ));
            }
        }
    }
    for r in 0..inst.n() {
        let name = inst.resident_name(r);
        let mut seen = HashSet::new();
        for g in inst.resident_prefs(r) {
            if g.is_empty() {
                out.push(format!("empty tie-group in preferences of {name}"));
            }
            for &h in g {
                if !seen.insert(h) {
                    out.push(format!(
                        "duplicate {} in preferences of {name}",
                        inst.hospital_name(h)
                    ));
                } else if inst.h_rank(h, r) == UNRANKED {
                    out.push(format!(
                        "asymmetry: {name} lists {} but {} does not list {name}",
                        inst.hospital_name(h),
                        inst.hospital_name(h)
                    ));
                }
            }
        }
    }
    out
}

fn check_shape(inst: &Instance, m: &Matching) -> Result<()> {
    if m.assignment.len() != inst.n() {
        return Err(Error::RejectedInput(format!(
            "matching covers {} residents, instance has {}",
            m.assignment.len(),
            inst.n()
        )));
    }
    if let Some(h) = m.assignment.iter().flatten().find(|&&h| h >= inst.m()) {
        return Err(Error::RejectedInput(format!("unknown hospital index {h}")));
    }
    Ok(())
}

/// Every pair mutually acceptable and every hospital closed or within `[l(h), u(h)]`.
pub fn is_feasible(inst: &Instance, m: &Matching) -> Result<bool> {
    check_shape(inst, m)?;
    Ok(feasible_unchecked(inst, m))
}

pub(crate) fn feasible_unchecked(inst: &Instance, m: &Matching) -> bool {
    if m.pairs()
        .iter()
        .any(|&(r, h)| !inst.mutually_acceptable(r, h))
    {
        return false;
    }
    m.counts(inst.m())
        .iter()
        .enumerate()
        .all(|(h, &c)| c == 0 || (inst.lower(h) <= c && c <= inst.cap(h)))
}

fn require_feasible(inst: &Instance, m: &Matching) -> Result<()> {
    if !is_feasible(inst, m)? {
        return Err(Error::RejectedInput("matching is not feasible".into()));
    }
    Ok(())
}

/// Weak blocking pairs, ordered by resident then hospital.
pub fn find_blocking_pairs(inst: &Instance, m: &Matching) -> Result<Vec<(Resident, Hospital)>> {
    require_feasible(inst, m)?;
    Ok(pairs_unchecked(inst, m))
}

fn pairs_unchecked(inst: &Instance, m: &Matching) -> Vec<(Resident, Hospital)> {
    let counts = m.counts(inst.m());
    // Worst tie-group among each hospital's assignees.
    let mut worst = vec![0u32; inst.m()];
    for (r, h) in m.pairs() {
        worst[h] = worst[h].max(inst.h_rank(h, r));
    }
    let mut out = Vec::new();
    for r in 0..inst.n() {
        let cur = m.assignment[r];
        for g in inst.resident_prefs(r) {
            for &h in g {
                if counts[h] == 0 || !inst.prefers(r, h, cur) {
                    continue;
                }
                let hr = inst.h_rank(h, r);
                if hr == UNRANKED {
                    continue;
                }
                if counts[h] < inst.cap(h) || hr < worst[h] {
                    out.push((r, h));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Blocking pairs computed from flat strict positions; only valid without ties. Kept as an
/// independent code path for cross-checking the tie-aware test.
pub fn find_blocking_pairs_strict(
    inst: &Instance,
    m: &Matching,
) -> Result<Vec<(Resident, Hospital)>> {
    if !inst.is_strict() {
        return Err(Error::WrongVariant("strict preferences required".into()));
    }
    require_feasible(inst, m)?;
    let pos_r = |r: Resident, h: Hospital| inst.resident_list(r).iter().position(|&x| x == h);
    let mut out = Vec::new();
    for h in 0..inst.m() {
        let members = m.residents_of(h);
        if members.is_empty() {
            continue;
        }
        let list = inst.acceptors(h);
        let pos_h = |r: Resident| list.iter().position(|&x| x == r).unwrap();
        let worst = members.iter().map(|&r| pos_h(r)).max().unwrap();
        for &r in &list {
            let wants = match m.assignment[r] {
                None => true,
                Some(c) => pos_r(r, h) < pos_r(r, c),
            };
            if wants
                && m.assignment[r] != Some(h)
                && (members.len() < inst.cap(h) || pos_h(r) < worst)
            {
                out.push((r, h));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// One witness coalition per closed hospital that has at least `l(h)` residents strictly
/// preferring it to their assignment.
pub fn find_blocking_coalitions(
    inst: &Instance,
    m: &Matching,
) -> Result<Vec<(Hospital, Vec<Resident>)>> {
    require_feasible(inst, m)?;
    Ok(coalitions_unchecked(inst, m))
}

fn coalitions_unchecked(inst: &Instance, m: &Matching) -> Vec<(Hospital, Vec<Resident>)> {
    let counts = m.counts(inst.m());
    let mut out = Vec::new();
    for h in 0..inst.m() {
        if counts[h] > 0 {
            continue;
        }
        let l = inst.lower(h);
        let mut witness: Vec<Resident> = (0..inst.n())
            .filter(|&r| inst.h_rank(h, r) != UNRANKED && inst.prefers(r, h, m.assignment[r]))
            .collect();
        if witness.len() >= l {
            witness.truncate(l);
            out.push((h, witness));
        }
    }
    out
}

pub fn check_stability(inst: &Instance, m: &Matching) -> Result<StabilityReport> {
    check_shape(inst, m)?;
    if !feasible_unchecked(inst, m) {
        return Ok(StabilityReport {
            feasible: false,
            blocking_pairs: Vec::new(),
            blocked_closed_hospitals: Vec::new(),
            stable: false,
        });
    }
    let blocking_pairs = pairs_unchecked(inst, m);
    let blocked_closed_hospitals = coalitions_unchecked(inst, m);
    let stable = blocking_pairs.is_empty() && blocked_closed_hospitals.is_empty();
    Ok(StabilityReport {
        feasible: true,
        blocking_pairs,
        blocked_closed_hospitals,
        stable,
    })
}

/// Shorthand for solvers asserting their own output.
pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    check_stability(inst, m).map(|r| r.stable).unwrap_or(false)
}
