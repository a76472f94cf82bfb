//! Integer programs deciding existence of a stable matching when the number of hospitals is
//! small, plus a bounded exact solver and LP-format export.

mod ha;
mod naive;
mod xp;

pub use ha::{build_haqlu_model, solve_haqlu_ilp};
pub use naive::{solve_naive, DEFAULT_NODE_BUDGET};
pub use xp::{build_hrqlut_model, enumerate_guesses, solve_hrqlut_xp, Guess, GuessIter};

use crate::error::{Error, Result};
use crate::model::{Hospital, Instance, Matching, Resident};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Residents sharing a preference relation and, for the guessed-open models, a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidentType {
    pub prefs: Vec<Vec<Hospital>>,
    pub signature: Vec<i8>,
    pub members: Vec<Resident>,
}

impl ResidentType {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn accepts(&self, h: Hospital) -> bool {
        self.prefs.iter().any(|g| g.contains(&h))
    }

    /// Position of the tie-group holding `h`.
    pub fn tier(&self, h: Hospital) -> Option<usize> {
        self.prefs.iter().position(|g| g.contains(&h))
    }

    /// Hospitals among `within` that this type weakly prefers to `h`.
    pub fn at_least_as_good(&self, h: Hospital, within: &[Hospital]) -> Vec<Hospital> {
        let Some(t) = self.tier(h) else {
            return Vec::new();
        };
        within
            .iter()
            .copied()
            .filter(|&x| self.tier(x).is_some_and(|tx| tx <= t))
            .collect()
    }
}

/// Groups residents by preference relation (tie-groups compared as sets) and by the optional
/// signature, ordered by lowest member.
pub fn resident_types(
    inst: &Instance,
    signature: Option<&dyn Fn(Resident) -> Vec<i8>>,
) -> Vec<ResidentType> {
    let mut index: BTreeMap<(Vec<Vec<Hospital>>, Vec<i8>), usize> = BTreeMap::new();
    let mut out: Vec<ResidentType> = Vec::new();
    for r in 0..inst.n() {
        let prefs: Vec<Vec<Hospital>> = inst
            .resident_prefs(r)
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.sort_unstable();
                g
            })
            .collect();
        let sig = signature.map(|f| f(r)).unwrap_or_default();
        let key = (prefs.clone(), sig.clone());
        match index.get(&key) {
            Some(&i) => out[i].members.push(r),
            None => {
                index.insert(key, out.len());
                out.push(ResidentType {
                    prefs,
                    signature: sig,
                    members: vec![r],
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    /// Number of residents of a type assigned to a hospital.
    Assign { ty: usize, hospital: Hospital },
    /// Hospital is open.
    Open(Hospital),
    /// Hospital is undersubscribed.
    Under(Hospital),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
    pub role: VarRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IlpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub types: Vec<ResidentType>,
}

impl IlpModel {
    pub fn add_var(&mut self, name: String, lower: i64, upper: i64, role: VarRole) -> usize {
        self.variables.push(Variable {
            name,
            lower,
            upper,
            role,
        });
        self.variables.len() - 1
    }

    /// Adds a constraint, merging repeated variables and dropping zero coefficients.
    pub fn add(&mut self, name: String, terms: &[(usize, i64)], relation: Relation, rhs: i64) {
        let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
        for &(v, a) in terms {
            assert!(v < self.variables.len(), "undeclared variable {v}");
            *merged.entry(v).or_default() += a;
        }
        self.constraints.push(Constraint {
            name,
            terms: merged.into_iter().filter(|&(_, a)| a != 0).collect(),
            relation,
            rhs,
        });
    }

    pub fn var(&self, role: VarRole) -> Option<usize> {
        self.variables.iter().position(|v| v.role == role)
    }

    /// Whether `values` respects every bound and constraint.
    pub fn satisfied_by(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len()
            && self
                .variables
                .iter()
                .zip(values)
                .all(|(v, &x)| v.lower <= x && x <= v.upper)
            && self.constraints.iter().all(|c| {
                let lhs: i64 = c.terms.iter().map(|&(v, a)| a * values[v]).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }
}

/// Places `x` residents of each type (lowest ids first) at the hospital of each assignment
/// variable.
pub fn decode_solution(inst: &Instance, model: &IlpModel, values: &[i64]) -> Result<Matching> {
    if values.len() != model.variables.len() {
        return Err(Error::InternalInvariant(
            "assignment length mismatch".into(),
        ));
    }
    let mut used = vec![0usize; model.types.len()];
    let mut m = Matching::empty(inst.n());
    for (var, &x) in model.variables.iter().zip(values) {
        let VarRole::Assign { ty, hospital } = var.role else {
            continue;
        };
        let members = &model.types[ty].members;
        let take = usize::try_from(x)
            .map_err(|_| Error::InternalInvariant(format!("negative value for {}", var.name)))?;
        if used[ty] + take > members.len() {
            return Err(Error::InternalInvariant(format!(
                "type {ty} assigned more residents than it has"
            )));
        }
        for &r in &members[used[ty]..used[ty] + take] {
            m.assignment[r] = Some(hospital);
        }
        used[ty] += take;
    }
    Ok(m)
}

fn write_terms(out: &mut String, model: &IlpModel, terms: &[(usize, i64)]) {
    if terms.is_empty() {
        // LP rows need a variable; a zero coefficient keeps the row's meaning.
        let _ = write!(out, "0 {}", model.variables[0].name);
        return;
    }
    for (k, &(v, a)) in terms.iter().enumerate() {
        let name = &model.variables[v].name;
        let sign = if a < 0 { "-" } else { "+" };
        let mag = a.abs();
        if k == 0 {
            if a < 0 {
                out.push_str("- ");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag == 1 {
            out.push_str(name);
        } else {
            let _ = write!(out, "{mag} {name}");
        }
    }
}

/// CPLEX LP text with a zero objective.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::from("Minimize\n obj:");
    if let Some(v) = model.variables.first() {
        let _ = write!(out, " 0 {}", v.name);
    }
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        if model.variables.is_empty() {
            break;
        }
        let _ = write!(out, " {}: ", c.name);
        write_terms(&mut out, model, &c.terms);
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " {rel} {}", c.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
    }
    let binaries: Vec<&str> = model
        .variables
        .iter()
        .filter(|v| v.lower == 0 && v.upper == 1)
        .map(|v| v.name.as_str())
        .collect();
    let generals: Vec<&str> = model
        .variables
        .iter()
        .filter(|v| !(v.lower == 0 && v.upper == 1))
        .map(|v| v.name.as_str())
        .collect();
    if !generals.is_empty() {
        let _ = writeln!(out, "Generals\n {}", generals.join(" "));
    }
    if !binaries.is_empty() {
        let _ = writeln!(out, "Binaries\n {}", binaries.join(" "));
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model_exports_header_and_footer() {
        assert_eq!(
            export_lp(&IlpModel::default()),
            "Minimize\n obj:\nSubject To\nBounds\nEnd\n"
        );
    }

    #[test]
    fn single_variable_export() {
        let mut m = IlpModel::default();
        let x = m.add_var("x".into(), 0, 2, VarRole::Open(0));
        m.add("c1".into(), &[(x, 1)], Relation::Ge, 1);
        m.add("c2".into(), &[(x, 3), (x, -1)], Relation::Le, 1);
        let text = export_lp(&m);
        assert_eq!(
            text,
            "Minimize\n obj: 0 x\nSubject To\n c1: x >= 1\n c2: 2 x <= 1\nBounds\n 0 <= x <= 2\nGenerals\n x\nEnd\n"
        );
        assert_eq!(text.matches("<= x <=").count(), 1);
    }

    #[test]
    fn decode_rejects_overfull_type() {
        let inst = crate::fixtures::f2();
        let mut m = IlpModel {
            types: vec![ResidentType {
                prefs: vec![vec![0]],
                signature: vec![],
                members: vec![0],
            }],
            ..Default::default()
        };
        m.add_var("x".into(), 0, 2, VarRole::Assign { ty: 0, hospital: 0 });
        assert!(matches!(
            decode_solution(&inst, &m, &[2]),
            Err(Error::InternalInvariant(_))
        ));
        assert_eq!(
            decode_solution(&inst, &m, &[0]).unwrap(),
            Matching::empty(inst.n())
        );
    }

    #[test]
    fn identical_lists_form_one_type() {
        let inst = Instance::builder()
            .hospital("h", 1, None)
            .resident("a", &["h"])
            .resident("b", &["h"])
            .resident("c", &["h"])
            .build()
            .unwrap();
        let types = resident_types(&inst, None);
        assert_eq!(types.len(), 1);
        assert_eq!(types[0].count(), 3);
        assert_eq!(resident_types(&crate::fixtures::f2(), None).len(), 4);
    }
}
