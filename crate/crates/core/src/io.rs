//! JSON documents for instances, matchings and stability reports.
//!
//! Every writer emits pretty-printed JSON with sorted keys and a trailing newline. Readers
//! report syntax errors and bad ids with the line and column of the offending entry.

use crate::error::{Error, Result};
use crate::model::{Hospital, HospitalPrefs, Instance, Matching, Resident};
use crate::stability::{validate_instance, StabilityReport};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Hr,
    HrTies,
    Ha,
}

impl Variant {
    pub fn of(inst: &Instance) -> Variant {
        let all_indifferent =
            inst.m() > 0 && (0..inst.m()).all(|h| inst.hospital_prefs(h).is_indifferent());
        if all_indifferent {
            Variant::Ha
        } else if inst.is_strict() {
            Variant::Hr
        } else {
            Variant::HrTies
        }
    }
}

// Field order is alphabetical so that serialization sorts keys.
#[derive(Serialize)]
struct InstanceDoc<'a> {
    hospitals: Vec<HospitalDoc>,
    residents: Vec<ResidentDoc>,
    variant: &'a Variant,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstanceDoc<'a> {
    #[serde(borrow)]
    hospitals: Vec<&'a RawValue>,
    #[serde(borrow)]
    residents: Vec<&'a RawValue>,
    variant: Variant,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HospitalDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    indifferent: Option<Vec<String>>,
    lower: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prefs: Option<Vec<Vec<String>>>,
    upper: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResidentDoc {
    id: String,
    prefs: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    hospital: Option<String>,
    resident: String,
}

/// 1-based line and column of byte `offset`.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

fn offset_of(text: &str, part: &str) -> usize {
    part.as_ptr() as usize - text.as_ptr() as usize
}

fn error_at(text: &str, part: &str, message: String) -> Error {
    let (line, column) = position(text, offset_of(text, part));
    Error::Parse {
        line,
        column,
        message,
    }
}

/// Lifts an error from parsing `part` to coordinates in `text`.
fn json_error(text: &str, part: &str, e: serde_json::Error) -> Error {
    let (l0, c0) = position(text, offset_of(text, part));
    let (line, column) = if e.line() <= 1 {
        (l0, c0 + e.column().saturating_sub(1))
    } else {
        (l0 + e.line() - 1, e.column())
    };
    Error::Parse {
        line,
        column,
        message: e.to_string(),
    }
}

fn parse_entry<'de, T: Deserialize<'de>>(text: &str, raw: &'de RawValue) -> Result<T> {
    serde_json::from_str(raw.get()).map_err(|e| json_error(text, raw.get(), e))
}

fn index_ids<'a>(
    text: &str,
    raws: &[&'a RawValue],
    ids: impl Iterator<Item = &'a str>,
    kind: &str,
) -> Result<HashMap<&'a str, usize>> {
    let mut out = HashMap::new();
    for (i, id) in ids.enumerate() {
        if out.insert(id, i).is_some() {
            return Err(error_at(
                text,
                raws[i].get(),
                format!("duplicate {kind} id {id}"),
            ));
        }
    }
    Ok(out)
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: RawInstanceDoc = serde_json::from_str(text).map_err(|e| json_error(text, text, e))?;
    let hospitals: Vec<HospitalDoc> = doc
        .hospitals
        .iter()
        .map(|raw| parse_entry(text, raw))
        .collect::<Result<_>>()?;
    let residents: Vec<ResidentDoc> = doc
        .residents
        .iter()
        .map(|raw| parse_entry(text, raw))
        .collect::<Result<_>>()?;
    // Each doc struct owns its strings; index them through stable references.
    let hidx = index_ids(
        text,
        &doc.hospitals,
        hospitals.iter().map(|h| h.id.as_str()),
        "hospital",
    )?;
    let ridx = index_ids(
        text,
        &doc.residents,
        residents.iter().map(|r| r.id.as_str()),
        "resident",
    )?;
    let mut rprefs = Vec::with_capacity(residents.len());
    for (r, rd) in residents.iter().enumerate() {
        let mut groups = Vec::new();
        for g in &rd.prefs {
            let mut out = Vec::new();
            for h in g {
                let &hi = hidx.get(h.as_str()).ok_or_else(|| {
                    error_at(
                        text,
                        doc.residents[r].get(),
                        format!("asymmetry: resident {} lists unknown hospital {h}", rd.id),
                    )
                })?;
                out.push(hi);
            }
            groups.push(out);
        }
        rprefs.push(groups);
    }
    let mut hprefs = Vec::with_capacity(hospitals.len());
    for (h, hd) in hospitals.iter().enumerate() {
        let here = doc.hospitals[h].get();
        let lookup = |r: &String| -> Result<Resident> {
            ridx.get(r.as_str()).copied().ok_or_else(|| {
                error_at(
                    text,
                    here,
                    format!("asymmetry: hospital {} lists unknown resident {r}", hd.id),
                )
            })
        };
        let p = match (&hd.prefs, &hd.indifferent) {
            (Some(groups), None) => HospitalPrefs::Ranked(
                groups
                    .iter()
                    .map(|g| g.iter().map(lookup).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?,
            ),
            (None, Some(list)) => {
                HospitalPrefs::Indifferent(list.iter().map(lookup).collect::<Result<_>>()?)
            }
            _ => {
                return Err(error_at(
                    text,
                    here,
                    format!(
                        "hospital {} needs exactly one of prefs and indifferent",
                        hd.id
                    ),
                ))
            }
        };
        hprefs.push(p);
    }
    let inst = Instance::new(
        residents.iter().map(|r| r.id.clone()).collect(),
        hospitals.iter().map(|h| h.id.clone()).collect(),
        hospitals.iter().map(|h| h.lower).collect(),
        hospitals.iter().map(|h| h.upper).collect(),
        rprefs,
        hprefs,
    )?;
    let mut problems = validate_instance(&inst);
    let actual = Variant::of(&inst);
    let fits = match doc.variant {
        Variant::HrTies => true,
        v => v == actual || (v == Variant::Hr && inst.m() == 0),
    };
    if !fits {
        problems.push(format!(
            "variant {:?} does not match the preferences ({:?})",
            doc.variant, actual
        ));
    }
    if !problems.is_empty() {
        return Err(Error::Invalid(problems));
    }
    Ok(inst)
}

fn names(inst: &Instance, rs: &[Resident]) -> Vec<String> {
    rs.iter()
        .map(|&r| inst.resident_name(r).to_string())
        .collect()
}

fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn serialize_instance(inst: &Instance) -> String {
    let variant = Variant::of(inst);
    let hospitals = (0..inst.m())
        .map(|h| {
            let (prefs, indifferent) = match inst.hospital_prefs(h) {
                HospitalPrefs::Ranked(g) => {
                    (Some(g.iter().map(|g| names(inst, g)).collect()), None)
                }
                HospitalPrefs::Indifferent(a) => (None, Some(names(inst, a))),
            };
            HospitalDoc {
                id: inst.hospital_name(h).to_string(),
                indifferent,
                lower: inst.lower(h),
                prefs,
                upper: inst.upper(h),
            }
        })
        .collect();
    let residents = (0..inst.n())
        .map(|r| ResidentDoc {
            id: inst.resident_name(r).to_string(),
            prefs: inst
                .resident_prefs(r)
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|&h| inst.hospital_name(h).to_string())
                        .collect()
                })
                .collect(),
        })
        .collect();
    to_text(&InstanceDoc {
        hospitals,
        residents,
        variant: &variant,
    })
}

/// Matched pairs in resident order.
pub fn serialize_matching(inst: &Instance, m: &Matching) -> String {
    let pairs: Vec<PairDoc> = m
        .pairs()
        .into_iter()
        .map(|(r, h)| PairDoc {
            hospital: Some(inst.hospital_name(h).to_string()),
            resident: inst.resident_name(r).to_string(),
        })
        .collect();
    to_text(&pairs)
}

/// Reads a list of `{resident, hospital}` entries; a null hospital leaves the resident
/// unmatched. Residents not mentioned are unmatched.
pub fn parse_matching(inst: &Instance, text: &str) -> Result<Matching> {
    let raws: Vec<&RawValue> = serde_json::from_str(text).map_err(|e| json_error(text, text, e))?;
    let mut m = Matching::empty(inst.n());
    let mut seen = vec![false; inst.n()];
    for raw in raws {
        let p: PairDoc = parse_entry(text, raw)?;
        let here = raw.get();
        let r = inst
            .resident_index(&p.resident)
            .ok_or_else(|| error_at(text, here, format!("unknown resident {}", p.resident)))?;
        if std::mem::replace(&mut seen[r], true) {
            return Err(error_at(
                text,
                here,
                format!("duplicate resident {}", p.resident),
            ));
        }
        m.assignment[r] = match p.hospital {
            None => None,
            Some(h) => Some(
                inst.hospital_index(&h)
                    .ok_or_else(|| error_at(text, here, format!("unknown hospital {h}")))?,
            ),
        };
    }
    Ok(m)
}

#[derive(Serialize)]
struct CoalitionDoc {
    hospital: String,
    residents: Vec<String>,
}

#[derive(Serialize)]
struct ReportDoc {
    blocked_closed_hospitals: Vec<CoalitionDoc>,
    blocking_pairs: Vec<PairDoc>,
    feasible: bool,
    stable: bool,
}

pub fn serialize_report(inst: &Instance, report: &StabilityReport) -> String {
    let hname = |h: Hospital| inst.hospital_name(h).to_string();
    to_text(&ReportDoc {
        blocked_closed_hospitals: report
            .blocked_closed_hospitals
            .iter()
            .map(|(h, rs)| CoalitionDoc {
                hospital: hname(*h),
                residents: names(inst, rs),
            })
            .collect(),
        blocking_pairs: report
            .blocking_pairs
            .iter()
            .map(|&(r, h)| PairDoc {
                hospital: Some(hname(h)),
                resident: inst.resident_name(r).to_string(),
            })
            .collect(),
        feasible: report.feasible,
        stable: report.stable,
    })
}

/// A list of matching documents.
pub fn serialize_matchings(inst: &Instance, ms: &[Matching]) -> String {
    let docs: Vec<serde_json::Value> = ms
        .iter()
        .map(|m| serde_json::from_str(&serialize_matching(inst, m)).expect("own output parses"))
        .collect();
    to_text(&docs)
}
