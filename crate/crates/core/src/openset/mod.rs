//! Stable matchings that open exactly a prescribed set of hospitals.

mod gale_shapley;
mod hopcroft_karp;

pub use gale_shapley::gale_shapley_resident_optimal;
pub use hopcroft_karp::hopcroft_karp;

use crate::error::{Error, Result};
use crate::model::{Hospital, Instance, Matching, Resident};
use crate::stability::check_stability;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpenSet {
    mask: Vec<bool>,
}

impl OpenSet {
    pub fn new(m: usize, hospitals: &[Hospital]) -> Result<Self> {
        let mut mask = vec![false; m];
        for &h in hospitals {
            if h >= m {
                return Err(Error::RejectedInput(format!("unknown hospital index {h}")));
            }
            mask[h] = true;
        }
        Ok(OpenSet { mask })
    }

    /// Hospitals whose bit is set in `bits`, bit `i` standing for `pool[i]`.
    pub fn from_bits(m: usize, pool: &[Hospital], bits: u64) -> Self {
        let mut mask = vec![false; m];
        for (i, &h) in pool.iter().enumerate() {
            if bits >> i & 1 == 1 {
                mask[h] = true;
            }
        }
        OpenSet { mask }
    }

    pub fn by_names(inst: &Instance, names: &[&str]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|s| {
                inst.hospital_index(s)
                    .ok_or_else(|| Error::RejectedInput(format!("unknown hospital {s}")))
            })
            .collect::<Result<Vec<_>>>()?;
        OpenSet::new(inst.m(), &ids)
    }

    pub fn contains(&self, h: Hospital) -> bool {
        self.mask.get(h).copied().unwrap_or(false)
    }

    pub fn hospitals(&self) -> Vec<Hospital> {
        (0..self.mask.len()).filter(|&h| self.mask[h]).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self, inst: &Instance) -> Result<()> {
        if self.mask.len() != inst.m() {
            return Err(Error::RejectedInput(
                "open set does not match the instance's hospitals".into(),
            ));
        }
        Ok(())
    }
}

fn opens_exactly(inst: &Instance, m: &Matching, open: &OpenSet) -> bool {
    let counts = m.counts(inst.m());
    (0..inst.m()).all(|h| (counts[h] > 0) == open.contains(h))
}

fn accept_if_stable(inst: &Instance, m: Matching, open: &OpenSet) -> Result<Option<Matching>> {
    if opens_exactly(inst, &m, open) && check_stability(inst, &m)?.stable {
        Ok(Some(m))
    } else {
        Ok(None)
    }
}

/// Strict resident preferences, no upper quotas: every resident goes to her favourite open
/// hospital, which is the only candidate.
pub fn solve_fixed_open_strict_noupper(
    inst: &Instance,
    open: &OpenSet,
) -> Result<Option<Matching>> {
    open.check(inst)?;
    if inst.has_resident_ties() || !inst.all_unbounded() {
        return Err(Error::WrongVariant(
            "needs strict resident preferences and no upper quotas".into(),
        ));
    }
    let mut m = Matching::empty(inst.n());
    for r in 0..inst.n() {
        m.assignment[r] = inst
            .resident_list(r)
            .into_iter()
            .find(|&h| open.contains(h) && inst.mutually_acceptable(r, h));
    }
    accept_if_stable(inst, m, open)
}

/// Strict preferences with upper quotas: the resident-optimal matching over the open
/// hospitals is the only candidate.
pub fn solve_fixed_open_hrqlu(inst: &Instance, open: &OpenSet) -> Result<Option<Matching>> {
    let m = gale_shapley_resident_optimal(inst, open)?;
    accept_if_stable(inst, m, open)
}

/// Ties allowed, no upper quotas.
pub fn solve_fixed_open_ties_noupper(inst: &Instance, open: &OpenSet) -> Result<Option<Matching>> {
    open.check(inst)?;
    if !inst.all_unbounded() {
        return Err(Error::WrongVariant("needs no upper quotas".into()));
    }
    Ok(tier_assign(inst, open, open))
}

/// Each resident must land in her best tie-group restricted to `pool`. Hospitals outside the
/// pool stay closed and must not attract a coalition; every hospital in `required` needs
/// `l(h)` residents, found by a bipartite matching against `l(h)` copies per hospital. The
/// rest go to the smallest member of their group.
pub(crate) fn tier_assign(inst: &Instance, pool: &OpenSet, required: &OpenSet) -> Option<Matching> {
    let n = inst.n();
    let best: Vec<Vec<Hospital>> = (0..n)
        .map(|r| {
            inst.resident_prefs(r)
                .iter()
                .map(|g| {
                    let mut in_pool: Vec<Hospital> = g
                        .iter()
                        .copied()
                        .filter(|&h| pool.contains(h) && inst.mutually_acceptable(r, h))
                        .collect();
                    in_pool.sort_unstable();
                    in_pool
                })
                .find(|g| !g.is_empty())
                .unwrap_or_default()
        })
        .collect();
    let tier = |r: Resident| best[r].first().map(|&h| inst.r_rank(r, h));
    for h in (0..inst.m()).filter(|&h| !pool.contains(h)) {
        let wanting = (0..n)
            .filter(|&r| {
                inst.mutually_acceptable(r, h) && tier(r).is_none_or(|t| inst.r_rank(r, h) < t)
            })
            .count();
        if wanting >= inst.lower(h) {
            return None;
        }
    }
    let req = required.hospitals();
    let mut copy_owner = Vec::new();
    let mut first_copy = vec![0usize; inst.m()];
    for &h in &req {
        first_copy[h] = copy_owner.len();
        copy_owner.extend(std::iter::repeat_n(h, inst.lower(h)));
    }
    if copy_owner.len() > n {
        return None;
    }
    let mut edges = Vec::new();
    for (r, hs) in best.iter().enumerate() {
        for &h in hs.iter().filter(|&&h| required.contains(h)) {
            for c in 0..inst.lower(h) {
                edges.push((r, first_copy[h] + c));
            }
        }
    }
    let matched = hopcroft_karp(n, copy_owner.len(), &edges).expect("edges in range");
    if matched.len() < copy_owner.len() {
        return None;
    }
    let mut m = Matching::empty(n);
    for r in 0..n {
        m.assignment[r] = best[r].first().copied();
    }
    for (r, c) in matched {
        m.assignment[r] = Some(copy_owner[c]);
    }
    Some(m)
}
