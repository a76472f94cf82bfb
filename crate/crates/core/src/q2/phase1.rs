use super::{Agent, AgentKind, PhaseState};

impl PhaseState {
    /// Proposal rounds until quiescence, then truncation and removal of quota-two hospitals
    /// with at most one resident left. Repeated until a round deletes nothing.
    pub fn phase1a(&mut self) {
        loop {
            let before = self.deletions;
            self.proposal_round();
            if self.deletions == before {
                break;
            }
        }
    }

    fn proposal_round(&mut self) {
        for a in 0..self.names.len() {
            self.held[a].clear();
            self.issued[a].clear();
            self.activated[a] = false;
            self.queued[a] = false;
        }
        self.queue.clear();
        for a in 0..self.names.len() {
            if matches!(self.kind[a], AgentKind::Resident | AgentKind::QuotaOne)
                && !self.lists[a].is_empty()
            {
                self.enqueue(a);
            }
        }
        while let Some(a) = self.queue.pop_front() {
            self.queued[a] = false;
            match self.kind[a] {
                AgentKind::Resident | AgentKind::QuotaOne => {
                    if self.issued[a].is_empty() && !self.lists[a].is_empty() {
                        let b = self.lists[a][0];
                        self.propose(a, b);
                    }
                }
                AgentKind::QuotaTwo if self.activated[a] => self.run_quota_two(a),
                _ => {}
            }
        }
        self.cleanup();
    }

    fn run_quota_two(&mut self, h: Agent) {
        while let Some(r) = self.next_target(h) {
            self.propose(h, r);
        }
        self.activated[h] = false;
        self.log(|s| format!("DEACTIVATE {}", s.names[h]));
    }

    /// First resident among the ones `h` should currently be proposing to that has no
    /// proposal from `h` yet.
    fn next_target(&self, h: Agent) -> Option<Agent> {
        let list = &self.lists[h];
        if list.len() <= 1 {
            return None;
        }
        let cap = self.cap[h];
        let single = match self.held[h].as_slice() {
            [r] if list.iter().take(cap).any(|x| x == r) => Some(*r),
            _ => None,
        };
        let want = match single {
            Some(_) => cap - 1,
            None => cap,
        };
        list.iter()
            .copied()
            .filter(|&x| Some(x) != single)
            .take(want)
            .find(|x| !self.issued[h].contains(x))
    }

    fn propose(&mut self, a: Agent, b: Agent) {
        self.log(|s| format!("PROPOSE {} {}", s.names[a], s.names[b]));
        self.issued[a].push(b);
        self.receive(b, a);
    }

    fn receive(&mut self, b: Agent, a: Agent) {
        match self.kind[b] {
            AgentKind::Resident | AgentKind::QuotaOne => match self.held[b].first().copied() {
                None => self.held[b].push(a),
                Some(p) if self.prefers(b, a, p) => {
                    self.held[b] = vec![a];
                    self.reject(b, p);
                }
                Some(_) => self.reject(b, a),
            },
            AgentKind::QuotaTwo => {
                self.activate(b);
                if self.lists[b].len() <= 1 {
                    self.reject(b, a);
                    return;
                }
                let better = self.held[b]
                    .iter()
                    .filter(|&&x| self.prefers(b, x, a))
                    .count();
                if better >= self.cap[b] {
                    self.reject(b, a);
                    return;
                }
                self.held[b].push(a);
                while let Some(p) = self.held[b].iter().copied().find(|&p| {
                    self.held[b]
                        .iter()
                        .filter(|&&x| self.prefers(b, x, p))
                        .count()
                        >= self.cap[b]
                }) {
                    self.reject(b, p);
                }
            }
            AgentKind::Removed => unreachable!("proposal to a removed hospital"),
        }
    }

    /// `x` rejects the proposal of `y`; the pair stops being mutually acceptable.
    fn reject(&mut self, x: Agent, y: Agent) {
        self.log(|s| format!("REJECT {} {}", s.names[x], s.names[y]));
        self.held[x].retain(|&z| z != y);
        self.issued[y].retain(|&z| z != x);
        self.deletions += 1;
        self.remove_pair(x, y);
        self.lost_proposal(y);
        self.collapse(x);
        self.collapse(y);
    }

    /// A quota-two hospital with at most one resident left rejects whatever it holds.
    fn collapse(&mut self, h: Agent) {
        if self.kind[h] == AgentKind::QuotaTwo && self.lists[h].len() <= 1 {
            while let Some(&p) = self.held[h].first() {
                self.reject(h, p);
            }
        }
    }

    fn cleanup(&mut self) {
        for a in 0..self.names.len() {
            if !matches!(self.kind[a], AgentKind::Resident | AgentKind::QuotaOne) {
                continue;
            }
            let Some(&p) = self.held[a].first() else {
                continue;
            };
            let pos = self.lists[a].iter().position(|&x| x == p).unwrap();
            let tail: Vec<Agent> = self.lists[a][pos + 1..].to_vec();
            for x in tail {
                self.delete_logged(a, x);
            }
        }
        for h in self.n..self.names.len() {
            if self.kind[h] == AgentKind::QuotaTwo && self.lists[h].len() <= 1 {
                self.kind[h] = AgentKind::Removed;
                for x in self.lists[h].clone() {
                    self.delete_logged(h, x);
                }
            }
        }
    }

    /// Splits every quota-two hospital holding at least two proposals into unit copies with the
    /// same preferences. Returns whether anything was split.
    pub fn phase1b(&mut self) -> bool {
        let targets: Vec<Agent> = (self.n..self.names.len())
            .filter(|&h| self.kind[h] == AgentKind::QuotaTwo && self.held[h].len() >= 2)
            .collect();
        for &h in &targets {
            self.split(h);
        }
        !targets.is_empty()
    }

    fn split(&mut self, h: Agent) {
        let list = std::mem::take(&mut self.lists[h]);
        self.rank[h].clear();
        let k = self.cap[h].min(list.len());
        self.log(|s| format!("SPLIT {} {k}", s.names[h]));
        let origin = self.lineage[h - self.n];
        let copies: Vec<Agent> = (1..=k)
            .map(|j| {
                let name = format!("{}#{j}", self.names[h]);
                self.push_agent(name, AgentKind::QuotaOne, 1, origin, list.clone())
            })
            .collect();
        for &r in &list {
            let mut new_list = Vec::with_capacity(self.lists[r].len() + k);
            for &x in &self.lists[r] {
                if x == h {
                    new_list.extend_from_slice(&copies);
                } else {
                    new_list.push(x);
                }
            }
            self.set_list(r, new_list);
        }
        self.kind[h] = AgentKind::Removed;
        self.held[h].clear();
        self.issued[h].clear();
    }
}
