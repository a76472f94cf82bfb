//! Polynomial-time solver for instances whose lower quotas are all at most two.
//!
//! Hospitals with lower quota one are replaced by unit copies, so afterwards every hospital is
//! either quota-one (`l = u = 1`) or quota-two (`l = 2`). Phase 1 alternates proposal rounds
//! ([`PhaseState::phase1a`]) with splitting quota-two hospitals that hold two proposals
//! ([`PhaseState::phase1b`]); Phase 2 finds and eliminates generalized rotations until every
//! resident has at most one hospital left.

mod phase1;
mod phase2;

pub use phase2::{AbRule, BaRule, Rotation};

use crate::error::{Error, Result};
use crate::model::{Hospital, Instance, Matching};
use crate::stability::{check_stability, validate_instance};
use std::collections::{BTreeMap, HashMap, VecDeque};

pub type Agent = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentKind {
    Resident,
    QuotaOne,
    QuotaTwo,
    /// Split or emptied quota-two hospital.
    Removed,
}

/// Mutable solver state. Agents are numbered residents first, then hospitals; split copies are
/// appended at the end.
#[derive(Debug, Clone)]
pub struct PhaseState {
    n: usize,
    names: Vec<String>,
    kind: Vec<AgentKind>,
    /// Upper quota of quota-two hospitals, capped at the number of acceptors.
    cap: Vec<usize>,
    lists: Vec<Vec<Agent>>,
    rank: Vec<HashMap<Agent, usize>>,
    /// Original hospital of every hospital agent (indexed by `agent - n`).
    lineage: Vec<Hospital>,
    held: Vec<Vec<Agent>>,
    issued: Vec<Vec<Agent>>,
    activated: Vec<bool>,
    s: Vec<bool>,
    queue: VecDeque<Agent>,
    queued: Vec<bool>,
    deletions: usize,
    trace: Option<Vec<String>>,
}

/// Result of [`solve_q2`]: a stable matching or `None` for NO, plus the event log if requested.
#[derive(Debug, Clone)]
pub struct Q2Outcome {
    pub matching: Option<Matching>,
    pub trace: Option<Vec<String>>,
}

/// Builds the initial state: strictness and `l <= 2` are required, quota-one hospitals become
/// unit copies.
pub fn normalize(inst: &Instance) -> Result<PhaseState> {
    let violations = validate_instance(inst);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    if !inst.is_strict() {
        return Err(Error::WrongVariant(
            "the quota-two solver needs strict preferences on both sides".into(),
        ));
    }
    if inst.max_lower() > 2 {
        return Err(Error::NotApplicable(
            "some hospital has lower quota three or more".into(),
        ));
    }
    let n = inst.n();
    let mut st = PhaseState {
        n,
        names: inst.resident_names().to_vec(),
        kind: vec![AgentKind::Resident; n],
        cap: vec![0; n],
        lists: vec![Vec::new(); n],
        rank: vec![HashMap::new(); n],
        lineage: Vec::new(),
        held: vec![Vec::new(); n],
        issued: vec![Vec::new(); n],
        activated: vec![false; n],
        s: vec![false; n],
        queue: VecDeque::new(),
        queued: vec![false; n],
        deletions: 0,
        trace: None,
    };
    // Agents standing for each original hospital, in preference order for residents.
    let mut copies: Vec<Vec<Agent>> = Vec::with_capacity(inst.m());
    for h in 0..inst.m() {
        let acceptors = inst.acceptors(h);
        let cap = inst.cap(h).min(acceptors.len()).max(inst.lower(h));
        let name = inst.hospital_name(h);
        let mut ids = Vec::new();
        if inst.lower(h) == 1 {
            let k = cap.max(1);
            for j in 1..=k {
                let label = if inst.cap(h) == 1 {
                    name.to_string()
                } else {
                    format!("{name}#{j}")
                };
                ids.push(st.push_agent(label, AgentKind::QuotaOne, 1, h, acceptors.clone()));
            }
        } else {
            ids.push(st.push_agent(name.to_string(), AgentKind::QuotaTwo, cap, h, acceptors));
        }
        copies.push(ids);
    }
    for r in 0..n {
        let list: Vec<Agent> = inst
            .resident_list(r)
            .into_iter()
            .flat_map(|h| copies[h].iter().copied())
            .collect();
        st.set_list(r, list);
    }
    Ok(st)
}

impl PhaseState {
    fn push_agent(
        &mut self,
        name: String,
        kind: AgentKind,
        cap: usize,
        origin: Hospital,
        list: Vec<Agent>,
    ) -> Agent {
        let id = self.names.len();
        self.names.push(name);
        self.kind.push(kind);
        self.cap.push(cap);
        self.lists.push(Vec::new());
        self.rank.push(HashMap::new());
        self.lineage.push(origin);
        self.held.push(Vec::new());
        self.issued.push(Vec::new());
        self.activated.push(false);
        self.queued.push(false);
        self.set_list(id, list);
        id
    }

    fn set_list(&mut self, a: Agent, list: Vec<Agent>) {
        self.rank[a] = list.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        self.lists[a] = list;
    }

    fn is_hospital(&self, a: Agent) -> bool {
        a >= self.n
    }

    fn prefers(&self, a: Agent, x: Agent, y: Agent) -> bool {
        self.rank[a][&x] < self.rank[a][&y]
    }

    fn log(&mut self, line: impl FnOnce(&Self) -> String) {
        if self.trace.is_none() {
            return;
        }
        let s = line(self);
        if let Some(t) = &mut self.trace {
            t.push(s);
        }
    }

    /// Deletes mutual acceptability of `a` and `b`, voiding any proposal between them.
    fn remove_pair(&mut self, a: Agent, b: Agent) {
        for (x, y) in [(a, b), (b, a)] {
            if let Some(p) = self.lists[x].iter().position(|&z| z == y) {
                self.lists[x].remove(p);
                self.rank[x].remove(&y);
            }
            // y proposed to x and x holds it.
            if self.held[x].contains(&y) {
                self.held[x].retain(|&z| z != y);
                self.issued[y].retain(|&z| z != x);
                self.lost_proposal(y);
            }
        }
    }

    fn lost_proposal(&mut self, a: Agent) {
        match self.kind[a] {
            AgentKind::Resident | AgentKind::QuotaOne => self.enqueue(a),
            AgentKind::QuotaTwo => self.activate(a),
            AgentKind::Removed => {}
        }
    }

    fn enqueue(&mut self, a: Agent) {
        if !self.queued[a] {
            self.queued[a] = true;
            self.queue.push_back(a);
        }
    }

    fn activate(&mut self, h: Agent) {
        if !self.activated[h] {
            self.activated[h] = true;
            self.log(|s| format!("ACTIVATE {}", s.names[h]));
            self.enqueue(h);
        }
    }

    fn delete_logged(&mut self, a: Agent, b: Agent) {
        self.log(|s| format!("DELETE {} {}", s.names[a], s.names[b]));
        self.deletions += 1;
        self.remove_pair(a, b);
    }

    pub fn kind_of(&self, a: Agent) -> AgentKind {
        self.kind[a]
    }

    pub fn name(&self, a: Agent) -> &str {
        &self.names[a]
    }

    pub fn agent(&self, name: &str) -> Option<Agent> {
        self.names.iter().position(|x| x == name)
    }

    pub fn list(&self, a: Agent) -> &[Agent] {
        &self.lists[a]
    }

    pub fn held(&self, a: Agent) -> &[Agent] {
        &self.held[a]
    }

    pub fn issued(&self, a: Agent) -> &[Agent] {
        &self.issued[a]
    }

    pub fn agent_count(&self) -> usize {
        self.names.len()
    }

    pub fn resident_count(&self) -> usize {
        self.n
    }

    /// Current lists by agent name, for structural comparisons.
    pub fn lists_by_name(&self) -> BTreeMap<String, Vec<String>> {
        (0..self.names.len())
            .map(|a| {
                (
                    self.names[a].clone(),
                    self.lists[a]
                        .iter()
                        .map(|&x| self.names[x].clone())
                        .collect(),
                )
            })
            .collect()
    }

    /// Number of mutually acceptable resident-hospital agent pairs.
    pub fn acceptability_count(&self) -> usize {
        self.lists[..self.n].iter().map(Vec::len).sum()
    }

    pub fn quota_two_count(&self) -> usize {
        self.kind
            .iter()
            .filter(|&&k| k == AgentKind::QuotaTwo)
            .count()
    }

    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn trace(&self) -> Option<&[String]> {
        self.trace.as_deref()
    }

    /// Original hospital an agent stands for.
    pub fn origin(&self, a: Agent) -> Option<Hospital> {
        self.is_hospital(a).then(|| self.lineage[a - self.n])
    }

    fn residents_with_long_lists(&self) -> bool {
        self.lists[..self.n].iter().any(|l| l.len() >= 2)
    }

    /// Checks of the state left by Phase 1: every agent holds and issues one proposal or none;
    /// quota-two hospitals hold at most one proposal in the permitted shapes; agents with
    /// several options only list agents that also have several options.
    pub fn check_phase1_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InternalInvariant(msg));
        for a in 0..self.names.len() {
            if self.kind[a] == AgentKind::Removed {
                continue;
            }
            let (h, i) = (self.held[a].len(), self.issued[a].len());
            if h != i || h > 1 {
                return fail(format!(
                    "{} holds {h} and issues {i} proposals after Phase 1",
                    self.names[a]
                ));
            }
            if self.kind[a] == AgentKind::QuotaTwo && h == 1 {
                let r = self.held[a][0];
                let top_two = self.lists[a].iter().take(2).any(|&x| x == r);
                if !((self.cap[a] == 2 && top_two) || self.lists[a].len() == 2) {
                    return fail(format!(
                        "quota-two hospital {} holds a proposal in a forbidden shape",
                        self.names[a]
                    ));
                }
            }
            if self.lists[a].len() > 1 {
                if let Some(&x) = self.lists[a].iter().find(|&&x| self.lists[x].len() <= 1) {
                    return fail(format!(
                        "{} has several options but lists {} with a single one",
                        self.names[a], self.names[x]
                    ));
                }
            }
        }
        Ok(())
    }

    /// Phase 1a followed by splits until no quota-two hospital holds two proposals.
    pub fn phase1(&mut self) -> Result<()> {
        loop {
            self.phase1a();
            if !self.phase1b() {
                break;
            }
        }
        if cfg!(debug_assertions) {
            self.check_phase1_invariants()?;
        }
        Ok(())
    }

    /// Early NO after a rotation elimination: a resident of S without options or with only
    /// quota-two hospitals that have one resident left, or an emptied quota-one hospital.
    fn doomed_after_elimination(&self, q1_nonempty_before: &[bool]) -> bool {
        let resident_stuck = (0..self.n).any(|r| {
            self.s[r]
                && self.lists[r]
                    .iter()
                    .all(|&h| self.kind[h] == AgentKind::QuotaTwo && self.lists[h].len() <= 1)
        });
        let q1_emptied = (self.n..self.names.len()).any(|h| {
            self.kind[h] == AgentKind::QuotaOne
                && q1_nonempty_before[h - self.n]
                && self.lists[h].is_empty()
        });
        resident_stuck || q1_emptied
    }

    fn extract(&self) -> Option<Matching> {
        let mut m = Matching::empty(self.n);
        for r in 0..self.n {
            match (self.s[r], self.lists[r].as_slice()) {
                (true, [h]) => m.assignment[r] = self.origin(*h),
                (false, []) => {}
                _ => return None,
            }
        }
        Some(m)
    }
}

/// Decides whether a stable matching exists. `trace` records the event log.
pub fn solve_q2(inst: &Instance, trace: bool) -> Result<Q2Outcome> {
    let mut st = normalize(inst)?;
    if trace {
        st.enable_trace();
    }
    st.phase1a();
    for r in 0..st.n {
        st.s[r] = !st.lists[r].is_empty();
    }
    let matching = loop {
        st.phase1()?;
        if (0..st.n).any(|r| st.s[r] && st.lists[r].is_empty()) {
            break None;
        }
        if !st.residents_with_long_lists() {
            break st.extract();
        }
        let rot = st.find_rotation()?.ok_or_else(|| {
            Error::InternalInvariant("a resident has two options but no rotation exists".into())
        })?;
        let q1_before: Vec<bool> = (st.n..st.names.len())
            .map(|h| st.kind[h] == AgentKind::QuotaOne && !st.lists[h].is_empty())
            .collect();
        st.eliminate_rotation(&rot);
        if st.doomed_after_elimination(&q1_before) {
            break None;
        }
    };
    if let Some(m) = &matching {
        if !check_stability(inst, m)?.stable {
            return Err(Error::InternalInvariant(
                "quota-two solver produced an unstable matching".into(),
            ));
        }
    }
    Ok(Q2Outcome {
        matching,
        trace: st.trace,
    })
}
