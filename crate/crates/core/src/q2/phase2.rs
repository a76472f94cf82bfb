use super::{Agent, AgentKind, PhaseState};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Rule used to step from `a_i` to `b_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbRule {
    /// `a_i` is a quota-one hospital: its second resident.
    One,
    /// `a_i`'s first hospital is flexible: that hospital's second resident other than `a_i`.
    Two,
    /// `a_i`'s second hospital is quota-one: that hospital.
    ThreeA,
    /// `a_i`'s second hospital is quota-two and holds a proposal: the proposer.
    ThreeBi,
    /// `a_i`'s second hospital is quota-two without a proposal: its first resident other than
    /// `a_i`.
    ThreeBii,
}

/// Rule used to step from `b_i` to `a_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaRule {
    /// `b_i` is a quota-one hospital: its last resident.
    One,
    /// `b_i`'s last hospital is quota-one: that hospital.
    Two,
    /// `b_i`'s last hospital is quota-two: the resident proposing to it.
    Three,
}

impl fmt::Display for AbRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AbRule::One => "AB+-1",
            AbRule::Two => "AB+-2",
            AbRule::ThreeA => "AB+-3a",
            AbRule::ThreeBi => "AB+-3b(i)",
            AbRule::ThreeBii => "AB+-3b(ii)",
        })
    }
}

impl fmt::Display for BaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaRule::One => "BA-1",
            BaRule::Two => "BA-2",
            BaRule::Three => "BA-3",
        })
    }
}

/// Cyclic sequence of pairs `(a_i, b_i)` with the rules that produced them: `ab[i]` led from
/// `a_i` to `b_{i+1}`, `ba[i]` led from `b_i` to `a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rotation {
    pub pairs: Vec<(Agent, Agent)>,
    pub ab: Vec<AbRule>,
    pub ba: Vec<BaRule>,
}

impl Rotation {
    pub fn describe(&self, st: &PhaseState) -> String {
        self.pairs
            .iter()
            .map(|&(a, b)| format!("({},{})", st.name(a), st.name(b)))
            .collect()
    }
}

impl PhaseState {
    fn step_ab(&self, a: Agent) -> Result<(Agent, AbRule)> {
        let missing = || Error::InternalInvariant(format!("no successor for {}", self.names[a]));
        let list = &self.lists[a];
        match self.kind[a] {
            AgentKind::QuotaOne => list.get(1).map(|&b| (b, AbRule::One)).ok_or_else(missing),
            AgentKind::Resident => {
                let first = *list.first().ok_or_else(missing)?;
                if self.kind[first] == AgentKind::QuotaTwo && self.lists[first].len() > 2 {
                    return self.lists[first]
                        .iter()
                        .filter(|&&x| x != a)
                        .nth(1)
                        .map(|&b| (b, AbRule::Two))
                        .ok_or_else(missing);
                }
                let g = *list.get(1).ok_or_else(missing)?;
                match self.kind[g] {
                    AgentKind::QuotaOne => Ok((g, AbRule::ThreeA)),
                    AgentKind::QuotaTwo => match self.held[g].first() {
                        Some(&r) => Ok((r, AbRule::ThreeBi)),
                        None => self.lists[g]
                            .iter()
                            .find(|&&x| x != a)
                            .map(|&b| (b, AbRule::ThreeBii))
                            .ok_or_else(missing),
                    },
                    _ => Err(missing()),
                }
            }
            _ => Err(missing()),
        }
    }

    fn step_ba(&self, b: Agent) -> Result<(Agent, BaRule)> {
        let missing = || Error::InternalInvariant(format!("no predecessor for {}", self.names[b]));
        let last = *self.lists[b].last().ok_or_else(missing)?;
        match self.kind[b] {
            AgentKind::QuotaOne => Ok((last, BaRule::One)),
            AgentKind::Resident => match self.kind[last] {
                AgentKind::QuotaOne => Ok((last, BaRule::Two)),
                AgentKind::QuotaTwo => self.held[last]
                    .first()
                    .map(|&r| (r, BaRule::Three))
                    .ok_or_else(missing),
                _ => Err(missing()),
            },
            _ => Err(missing()),
        }
    }

    /// Generalized rotation seeded at the lowest-index resident with two or more hospitals, or
    /// `None` when no such resident exists. Expects the state left by [`PhaseState::phase1`].
    pub fn find_rotation(&self) -> Result<Option<Rotation>> {
        let Some(seed) = (0..self.n).find(|&r| self.lists[r].len() >= 2) else {
            return Ok(None);
        };
        // a_seq[t] pairs with b_seq[t] for t >= 1; b_seq[0] is filled when the cycle closes.
        let mut a_seq = vec![seed];
        let mut b_seq: Vec<Agent> = vec![usize::MAX];
        let mut ab_tags = Vec::new();
        let mut ba_tags = vec![BaRule::One];
        let mut seen: HashMap<Agent, usize> = HashMap::from([(seed, 0)]);
        loop {
            let a = *a_seq.last().unwrap();
            let (b, abr) = self.step_ab(a)?;
            let (next, bar) = self.step_ba(b)?;
            ab_tags.push(abr);
            b_seq.push(b);
            ba_tags.push(bar);
            if let Some(&i) = seen.get(&next) {
                let j = a_seq.len();
                let mut rot = Rotation {
                    pairs: Vec::new(),
                    ab: Vec::new(),
                    ba: Vec::new(),
                };
                for t in i..j {
                    let k = if t == i { j } else { t };
                    rot.pairs.push((a_seq[t], b_seq[k]));
                    rot.ab.push(ab_tags[t]);
                    rot.ba.push(ba_tags[k]);
                }
                self.check_rotation(&rot)?;
                return Ok(Some(rot));
            }
            if a_seq.len() > self.names.len() {
                return Err(Error::InternalInvariant(
                    "rotation search did not cycle".into(),
                ));
            }
            seen.insert(next, a_seq.len());
            a_seq.push(next);
        }
    }

    fn check_rotation(&self, rot: &Rotation) -> Result<()> {
        let mut a_seen = std::collections::HashSet::new();
        let mut b_seen = std::collections::HashSet::new();
        for &(a, b) in &rot.pairs {
            if !a_seen.insert(a) || !b_seen.insert(b) {
                return Err(Error::InternalInvariant("rotation repeats an agent".into()));
            }
            if self.lists[a].len() < 2 || self.lists[b].len() < 2 {
                return Err(Error::InternalInvariant(
                    "rotation agent with fewer than two options".into(),
                ));
            }
        }
        Ok(())
    }

    /// Deletes `(a_i, b_i)` when either is a hospital, otherwise `(first hospital of a_i, b_i)`.
    pub fn eliminate_rotation(&mut self, rot: &Rotation) {
        let desc = rot.describe(self);
        self.log(|_| format!("ROTATION {desc}"));
        let pairs: Vec<(Agent, Agent)> = rot
            .pairs
            .iter()
            .map(|&(a, b)| {
                if self.is_hospital(a) || self.is_hospital(b) {
                    (a, b)
                } else {
                    (self.lists[a][0], b)
                }
            })
            .collect();
        for (x, y) in pairs {
            if self.lists[x].contains(&y) {
                self.delete_logged(x, y);
            }
        }
    }
}
