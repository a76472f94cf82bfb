use super::OpenSet;
use crate::error::{Error, Result};
use crate::model::{Instance, Matching};
use std::collections::VecDeque;

/// Resident-proposing deferred acceptance over the open hospitals with capacities `u(h)`,
/// lower quotas ignored.
pub fn gale_shapley_resident_optimal(inst: &Instance, open: &OpenSet) -> Result<Matching> {
    open.check(inst)?;
    if inst.has_resident_ties() {
        return Err(Error::WrongVariant(
            "resident preferences contain ties".into(),
        ));
    }
    for h in open.hospitals() {
        let crowded = inst.acceptors(h).len() > inst.cap(h);
        let ranked_strictly = !inst.hospital_prefs(h).is_indifferent()
            && inst.hospital_prefs(h).groups().iter().all(|g| g.len() == 1);
        if crowded && !ranked_strictly {
            return Err(Error::WrongVariant(format!(
                "hospital {} must choose between tied residents",
                inst.hospital_name(h)
            )));
        }
    }
    let lists: Vec<Vec<usize>> = (0..inst.n())
        .map(|r| {
            inst.resident_list(r)
                .into_iter()
                .filter(|&h| open.contains(h) && inst.mutually_acceptable(r, h))
                .collect()
        })
        .collect();
    let mut next = vec![0usize; inst.n()];
    let mut held: Vec<Vec<usize>> = vec![Vec::new(); inst.m()];
    let mut free: VecDeque<usize> = (0..inst.n()).collect();
    while let Some(r) = free.pop_front() {
        let Some(&h) = lists[r].get(next[r]) else {
            continue;
        };
        next[r] += 1;
        held[h].push(r);
        if held[h].len() > inst.cap(h) {
            let worst = *held[h].iter().max_by_key(|&&x| inst.h_rank(h, x)).unwrap();
            held[h].retain(|&x| x != worst);
            free.push_back(worst);
        }
    }
    let mut m = Matching::empty(inst.n());
    for (h, rs) in held.iter().enumerate() {
        for &r in rs {
            m.assignment[r] = Some(h);
        }
    }
    Ok(m)
}
