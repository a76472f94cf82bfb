//! Exhaustive enumeration of feasible and stable matchings for small instances.
//!
//! Residents are assigned in index order, each trying "unmatched" first and then its acceptable
//! hospitals by index, so matchings come out in lexicographic order. Branches where an
//! underfilled hospital can no longer reach its lower quota are cut.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Hospital, Instance, Matching, Resident};
use crate::stability::is_stable;
use std::collections::BTreeSet;
use std::ops::ControlFlow;

pub const DEFAULT_CAP: usize = 1_000_000;

struct Search<'a> {
    inst: &'a Instance,
    options: Vec<Vec<Hospital>>,
    // remaining[h][i]: acceptors of h with index >= i.
    remaining: Vec<Vec<usize>>,
    assignment: Vec<Option<Hospital>>,
    counts: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance) -> Self {
        let (n, m) = (inst.n(), inst.m());
        let options: Vec<Vec<Hospital>> = (0..n)
            .map(|r| (0..m).filter(|&h| inst.mutually_acceptable(r, h)).collect())
            .collect();
        let mut remaining = vec![vec![0; n + 1]; m];
        for (h, rem) in remaining.iter_mut().enumerate() {
            for r in (0..n).rev() {
                rem[r] = rem[r + 1] + usize::from(inst.mutually_acceptable(r, h));
            }
        }
        Search {
            inst,
            options,
            remaining,
            assignment: vec![None; n],
            counts: vec![0; m],
        }
    }

    fn hopeless(&self, next: Resident) -> bool {
        (0..self.inst.m()).any(|h| {
            let c = self.counts[h];
            c > 0 && c < self.inst.lower(h) && c + self.remaining[h][next] < self.inst.lower(h)
        })
    }

    fn run<F>(&mut self, r: Resident, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Option<Hospital>]) -> ControlFlow<()>,
    {
        if r == self.inst.n() {
            return visit(&self.assignment);
        }
        if !self.hopeless(r + 1) {
            self.run(r + 1, visit)?;
        }
        for k in 0..self.options[r].len() {
            let h = self.options[r][k];
            if self.counts[h] >= self.inst.cap(h) {
                continue;
            }
            self.counts[h] += 1;
            self.assignment[r] = Some(h);
            let flow = if self.hopeless(r + 1) {
                ControlFlow::Continue(())
            } else {
                self.run(r + 1, visit)
            };
            self.counts[h] -= 1;
            self.assignment[r] = None;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` on every feasible matching in lexicographic order until it breaks.
pub fn for_each_feasible<F>(inst: &Instance, mut visit: F)
where
    F: FnMut(&Matching) -> ControlFlow<()>,
{
    let mut s = Search::new(inst);
    let mut m = Matching::empty(inst.n());
    let _ = s.run(0, &mut |a: &[Option<Hospital>]| {
        m.assignment.copy_from_slice(a);
        visit(&m)
    });
}

pub fn enumerate_feasible(inst: &Instance, cap: usize) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_feasible(inst, |m| {
        if out.len() == cap {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(Error::EnumerationOverflow(cap));
    }
    Ok(out)
}

/// All stable matchings in lexicographic order; more than `cap` is an error.
pub fn enumerate_stable(inst: &Instance, cap: usize) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_feasible(inst, |m| {
        if is_stable(inst, m) {
            if out.len() == cap {
                overflow = true;
                return ControlFlow::Break(());
            }
            out.push(m.clone());
        }
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(Error::EnumerationOverflow(cap));
    }
    Ok(out)
}

/// Lexicographically first stable matching, if any.
pub fn first_stable(inst: &Instance) -> Option<Matching> {
    let mut found = None;
    for_each_feasible(inst, |m| {
        if is_stable(inst, m) {
            found = Some(m.clone());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    found
}

/// Stable-matching existence for a batch of instances.
pub fn batch_has_stable(instances: &[Instance], exec: Exec) -> Vec<bool> {
    exec.map(instances, |i| first_stable(i).is_some())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuralReport {
    pub stable_count: usize,
    pub matched_set_uniform: bool,
    pub open_count_uniform: bool,
    /// The common matched set when uniform.
    pub matched_residents: Option<Vec<Resident>>,
    /// Number of open hospitals per stable matching, in enumeration order.
    pub open_counts: Vec<usize>,
}

/// Whether all stable matchings match the same residents and open equally many hospitals.
pub fn rural_check(inst: &Instance, cap: usize) -> Result<RuralReport> {
    let stable = enumerate_stable(inst, cap)?;
    let sets: BTreeSet<Vec<Resident>> = stable.iter().map(Matching::matched_residents).collect();
    let open_counts: Vec<usize> = stable
        .iter()
        .map(|m| m.open_hospitals(inst.m()).len())
        .collect();
    let matched_set_uniform = sets.len() <= 1;
    let open_count_uniform = open_counts.windows(2).all(|w| w[0] == w[1]);
    Ok(RuralReport {
        stable_count: stable.len(),
        matched_set_uniform,
        open_count_uniform,
        matched_residents: if matched_set_uniform {
            Some(sets.into_iter().next().unwrap_or_default())
        } else {
            None
        },
        open_counts,
    })
}
