//! Solvers that enumerate candidate sets of open hospitals.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Hospital, Instance, Matching};
use crate::openset::{
    gale_shapley_resident_optimal, solve_fixed_open_hrqlu, solve_fixed_open_strict_noupper,
    tier_assign, OpenSet,
};
use crate::stability::check_stability;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    Open,
    Closed,
}

/// Bitmasks over `k` elements ordered by popcount, then by value.
pub fn subsets_by_size(k: usize) -> Vec<u64> {
    assert!(k < 64, "subset enumeration over {k} elements");
    let mut masks: Vec<u64> = (0..1u64 << k).collect();
    masks.sort_by_key(|&x| (x.count_ones(), x));
    masks
}

fn unit_hospitals(inst: &Instance) -> Vec<Hospital> {
    (0..inst.m()).filter(|&h| inst.lower(h) == 1).collect()
}

fn quota_pool(inst: &Instance) -> Result<Vec<Hospital>> {
    let pool = inst.quota_hospitals();
    if pool.len() >= 32 {
        return Err(Error::EnumerationOverflow(pool.len()));
    }
    Ok(pool)
}

fn check_strict_shape(inst: &Instance) -> Result<()> {
    if inst.has_resident_ties() {
        return Err(Error::WrongVariant(
            "resident preferences contain ties; use the ties solver".into(),
        ));
    }
    if !inst.all_unbounded() && !inst.is_strict() {
        return Err(Error::WrongVariant(
            "hospital preferences must be strict when upper quotas are present".into(),
        ));
    }
    Ok(())
}

fn candidate_for_subset(
    inst: &Instance,
    quota: &[Hospital],
    mask: u64,
) -> Result<Option<Matching>> {
    let mut pool = OpenSet::from_bits(inst.m(), quota, mask).hospitals();
    pool.extend(unit_hospitals(inst));
    let pool = OpenSet::new(inst.m(), &pool)?;
    let m = if inst.all_unbounded() {
        let mut m = Matching::empty(inst.n());
        for r in 0..inst.n() {
            m.assignment[r] = inst
                .resident_list(r)
                .into_iter()
                .find(|&h| pool.contains(h) && inst.mutually_acceptable(r, h));
        }
        m
    } else {
        gale_shapley_resident_optimal(inst, &pool)?
    };
    Ok(check_stability(inst, &m)?.stable.then_some(m))
}

/// Tries every subset of the hospitals with `l(h) >= 2` as the open part of that group.
pub fn solve_fpt_subsets(inst: &Instance, exec: Exec) -> Result<Option<Matching>> {
    check_strict_shape(inst)?;
    let quota = quota_pool(inst)?;
    let masks = subsets_by_size(quota.len());
    exec.find_map_first(&masks, |&mask| {
        candidate_for_subset(inst, &quota, mask).transpose()
    })
    .transpose()
}

/// Verdict for every subset of the quota hospitals, in enumeration order.
pub fn fpt_all_verdicts(inst: &Instance, exec: Exec) -> Result<Vec<(u64, Option<Matching>)>> {
    check_strict_shape(inst)?;
    let quota = quota_pool(inst)?;
    let masks = subsets_by_size(quota.len());
    exec.map(&masks, |&mask| {
        candidate_for_subset(inst, &quota, mask).map(|m| (mask, m))
    })
    .into_iter()
    .collect()
}

/// Ties variant without upper quotas. Residents go to their best tie-group among the chosen
/// quota hospitals and all unit hospitals; each chosen quota hospital must be filled to `l(h)`.
pub fn solve_fpt_subsets_ties(inst: &Instance, exec: Exec) -> Result<Option<Matching>> {
    if !inst.all_unbounded() {
        return Err(Error::WrongVariant("needs no upper quotas".into()));
    }
    let quota = quota_pool(inst)?;
    let masks = subsets_by_size(quota.len());
    let units = unit_hospitals(inst);
    exec.find_map_first(&masks, |&mask| {
        let required = OpenSet::from_bits(inst.m(), &quota, mask);
        let mut pool = required.hospitals();
        pool.extend(&units);
        let pool = OpenSet::new(inst.m(), &pool).ok()?;
        let m = tier_assign(inst, &pool, &required)?;
        match check_stability(inst, &m) {
            Ok(rep) if rep.stable => Some(Ok(m)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        }
    })
    .transpose()
}

/// Lexicographic `k`-subsets of `0..m`.
pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Stable matching with exactly `k` open (or `k` closed) hospitals.
pub fn solve_count_open(
    inst: &Instance,
    k: usize,
    mode: CountMode,
    exec: Exec,
) -> Result<Option<Matching>> {
    if k > inst.m() {
        return Err(Error::RejectedInput(format!(
            "k = {k} outside 0..={}",
            inst.m()
        )));
    }
    check_strict_shape(inst)?;
    let size = match mode {
        CountMode::Open => k,
        CountMode::Closed => inst.m() - k,
    };
    let sets = combinations(inst.m(), size);
    let unbounded = inst.all_unbounded();
    exec.find_map_first(&sets, |hs| {
        let open = match OpenSet::new(inst.m(), hs) {
            Ok(o) => o,
            Err(e) => return Some(Err(e)),
        };
        let res = if unbounded {
            solve_fixed_open_strict_noupper(inst, &open)
        } else {
            solve_fixed_open_hrqlu(inst, &open)
        };
        res.transpose()
    })
    .transpose()
}
