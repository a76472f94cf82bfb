use super::{decode_solution, resident_types, solve_naive, IlpModel, Relation, VarRole};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Hospital, Instance, Matching, Resident};
use crate::openset::OpenSet;
use crate::stability::check_stability;
use std::collections::BTreeMap;

/// Guessed open hospitals, the worst resident each of them takes (up to ties), and which of
/// them are full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guess {
    pub open: OpenSet,
    pub worst: BTreeMap<Hospital, Resident>,
    pub full: OpenSet,
}

/// Hospitals that can be full: bounded and with at least `u(h)` acceptable residents.
fn fullable(inst: &Instance, h: Hospital) -> bool {
    inst.upper(h).is_some_and(|u| u <= inst.acceptors(h).len())
}

/// Lazily enumerates guesses: open sets by size then bitmask value, worst-resident choices in
/// lexicographic order, full sets by bitmask value.
pub struct GuessIter<'a> {
    inst: &'a Instance,
    size: usize,
    mask: Option<u64>,
    open: Vec<Hospital>,
    acceptors: Vec<Vec<Resident>>,
    fullable: Vec<Hospital>,
    choice: Vec<usize>,
    full_mask: u64,
    started: bool,
}

impl<'a> GuessIter<'a> {
    fn load_mask(&mut self, mask: u64) {
        self.mask = Some(mask);
        self.open = (0..self.inst.m()).filter(|&h| mask >> h & 1 == 1).collect();
        self.acceptors = self.open.iter().map(|&h| self.inst.acceptors(h)).collect();
        self.fullable = self
            .open
            .iter()
            .copied()
            .filter(|&h| fullable(self.inst, h))
            .collect();
        self.choice = vec![0; self.open.len()];
        self.full_mask = 0;
        self.started = false;
    }

    /// Next open-set mask in (popcount, value) order.
    fn advance_mask(&mut self) -> bool {
        let m = self.inst.m();
        let next = match self.mask {
            None => Some(0),
            Some(x) if x != 0 => {
                let c = x & x.wrapping_neg();
                let r = x + c;
                let y = (((r ^ x) >> 2) / c) | r;
                (y < 1u64 << m).then_some(y)
            }
            Some(_) => None,
        };
        match next {
            Some(y) => {
                self.load_mask(y);
                true
            }
            None if self.size < m => {
                self.size += 1;
                self.load_mask((1u64 << self.size) - 1);
                true
            }
            None => false,
        }
    }

    fn advance_within(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return self.acceptors.iter().all(|a| !a.is_empty());
        }
        self.full_mask += 1;
        if self.full_mask < 1u64 << self.fullable.len() {
            return true;
        }
        self.full_mask = 0;
        for i in (0..self.choice.len()).rev() {
            self.choice[i] += 1;
            if self.choice[i] < self.acceptors[i].len() {
                return true;
            }
            self.choice[i] = 0;
        }
        false
    }

    fn current(&self) -> Guess {
        let m = self.inst.m();
        let worst = self
            .open
            .iter()
            .zip(&self.choice)
            .zip(&self.acceptors)
            .map(|((&h, &c), acc)| (h, acc[c]))
            .collect();
        Guess {
            open: OpenSet::new(m, &self.open).expect("hospitals in range"),
            worst,
            full: OpenSet::from_bits(m, &self.fullable, self.full_mask),
        }
    }
}

impl Iterator for GuessIter<'_> {
    type Item = Guess;

    fn next(&mut self) -> Option<Guess> {
        loop {
            if self.mask.is_some() && self.advance_within() {
                return Some(self.current());
            }
            if !self.advance_mask() {
                return None;
            }
        }
    }
}

/// Every well-formed guess. Hospitals without an upper quota, or with fewer acceptable
/// residents than `u(h)`, are never guessed full.
pub fn enumerate_guesses(inst: &Instance) -> GuessIter<'_> {
    assert!(
        inst.m() < 64,
        "guess enumeration over {} hospitals",
        inst.m()
    );
    GuessIter {
        inst,
        size: 0,
        mask: None,
        open: Vec::new(),
        acceptors: Vec::new(),
        fullable: Vec::new(),
        choice: Vec::new(),
        full_mask: 0,
        started: false,
    }
}

fn check_guess(inst: &Instance, g: &Guess) -> Result<()> {
    let bad = |msg: String| Err(Error::RejectedInput(msg));
    let open = g.open.hospitals();
    if open
        .iter()
        .chain(&g.full.hospitals())
        .any(|&h| h >= inst.m())
    {
        return bad("guess names an unknown hospital".into());
    }
    if g.full.hospitals().iter().any(|&h| !g.open.contains(h)) {
        return bad("full hospitals must be open".into());
    }
    if g.worst.keys().copied().collect::<Vec<_>>() != open {
        return bad("need exactly one worst resident per open hospital".into());
    }
    for (&h, &r) in &g.worst {
        if r >= inst.n() || !inst.mutually_acceptable(r, h) {
            return bad(format!(
                "worst resident for {} is not acceptable to it",
                inst.hospital_name(h)
            ));
        }
    }
    Ok(())
}

/// Signature entry of `r` at open hospital `h`: 1 if `h` prefers `r` to its guessed worst
/// resident, 0 if tied, -1 otherwise (including residents `h` does not accept).
fn signature_entry(inst: &Instance, g: &Guess, r: Resident, h: Hospital) -> i8 {
    if !inst.mutually_acceptable(r, h) {
        return -1;
    }
    let worst = inst.h_rank(h, g.worst[&h]);
    match inst.h_rank(h, r).cmp(&worst) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => -1,
    }
}

/// Model for a fixed guess. Assignment variables `x_t{i}_h{h}` exist for open hospitals only;
/// types group residents by preferences and signature.
pub fn build_hrqlut_model(inst: &Instance, g: &Guess) -> Result<IlpModel> {
    check_guess(inst, g)?;
    let os = g.open.hospitals();
    let sig =
        |r: Resident| -> Vec<i8> { os.iter().map(|&h| signature_entry(inst, g, r, h)).collect() };
    let mut model = IlpModel {
        types: resident_types(inst, Some(&sig)),
        ..Default::default()
    };
    let types = model.types.clone();
    let mut x: Vec<BTreeMap<Hospital, usize>> = vec![BTreeMap::new(); types.len()];
    for (i, ty) in types.iter().enumerate() {
        for &h in &os {
            x[i].insert(
                h,
                model.add_var(
                    format!("x_t{i}_h{h}"),
                    0,
                    ty.count() as i64,
                    VarRole::Assign { ty: i, hospital: h },
                ),
            );
        }
    }
    let upper = |h: Hospital| inst.cap(h).min(inst.n() + 1) as i64;
    let weakly_better = |i: usize, h: Hospital| -> Vec<(usize, i64)> {
        types[i]
            .at_least_as_good(h, &os)
            .into_iter()
            .map(|h2| (x[i][&h2], 1))
            .collect()
    };
    for (p, &h) in os.iter().enumerate() {
        for (i, ty) in types.iter().enumerate() {
            if ty.signature[p] == 1 {
                model.add(
                    format!("bpa_t{i}_h{h}"),
                    &weakly_better(i, h),
                    Relation::Ge,
                    ty.count() as i64,
                );
            }
        }
    }
    for &h in os.iter().filter(|&&h| !g.full.contains(h)) {
        for (i, ty) in types.iter().enumerate().filter(|(_, ty)| ty.accepts(h)) {
            model.add(
                format!("bpb_t{i}_h{h}"),
                &weakly_better(i, h),
                Relation::Ge,
                ty.count() as i64,
            );
        }
    }
    for h in (0..inst.m()).filter(|&h| !g.open.contains(h)) {
        let mut t = Vec::new();
        let mut wanting = 0i64;
        for (i, ty) in types.iter().enumerate().filter(|(_, ty)| ty.accepts(h)) {
            wanting += ty.count() as i64;
            t.extend(
                ty.at_least_as_good(h, &os)
                    .into_iter()
                    .map(|h2| (x[i][&h2], -1)),
            );
        }
        model.add(
            format!("nobc_h{h}"),
            &t,
            Relation::Le,
            inst.lower(h) as i64 - 1 - wanting,
        );
    }
    for &h in &os {
        let load: Vec<(usize, i64)> = (0..types.len()).map(|i| (x[i][&h], 1)).collect();
        model.add(
            format!("lower_h{h}"),
            &load,
            Relation::Ge,
            inst.lower(h) as i64,
        );
        model.add(format!("upper_h{h}"), &load, Relation::Le, upper(h));
    }
    for (i, ty) in types.iter().enumerate() {
        let t: Vec<(usize, i64)> = os.iter().map(|&h| (x[i][&h], 1)).collect();
        model.add(format!("count_t{i}"), &t, Relation::Le, ty.count() as i64);
        for &h in os.iter().filter(|&&h| !ty.accepts(h)) {
            model.add(format!("acc_t{i}_h{h}"), &[(x[i][&h], 1)], Relation::Eq, 0);
        }
    }
    for &h in &os {
        let load: Vec<(usize, i64)> = (0..types.len()).map(|i| (x[i][&h], 1)).collect();
        if g.full.contains(h) {
            model.add(format!("full_h{h}"), &load, Relation::Eq, upper(h));
        } else {
            model.add(format!("under_h{h}"), &load, Relation::Le, upper(h) - 1);
        }
    }
    for (p, &h) in os.iter().enumerate() {
        let mut tied = Vec::new();
        for (i, ty) in types.iter().enumerate() {
            match ty.signature[p] {
                -1 => model.add(
                    format!("worse_t{i}_h{h}"),
                    &[(x[i][&h], 1)],
                    Relation::Eq,
                    0,
                ),
                0 => tied.push((x[i][&h], 1)),
                _ => {}
            }
        }
        model.add(format!("worst_h{h}"), &tied, Relation::Ge, 1);
    }
    Ok(model)
}

const CHUNK: usize = 256;

/// Tries guesses in enumeration order and returns the decoded matching of the first feasible
/// model.
pub fn solve_hrqlut_xp(inst: &Instance, exec: Exec, node_budget: u64) -> Result<Option<Matching>> {
    let mut guesses = enumerate_guesses(inst).filter(|g| {
        g.open
            .hospitals()
            .iter()
            .map(|&h| inst.lower(h))
            .sum::<usize>()
            <= inst.n()
    });
    loop {
        let chunk: Vec<Guess> = guesses.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(None);
        }
        let found = exec.find_map_first(&chunk, |g| {
            let attempt = || -> Result<Option<Matching>> {
                let model = build_hrqlut_model(inst, g)?;
                match solve_naive(&model, node_budget)? {
                    Some(values) => decode_solution(inst, &model, &values).map(Some),
                    None => Ok(None),
                }
            };
            attempt().transpose()
        });
        if let Some(res) = found {
            let m = res?;
            if !check_stability(inst, &m)?.stable {
                return Err(Error::InternalInvariant(
                    "decoded matching is not stable".into(),
                ));
            }
            return Ok(Some(m));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f1, f4};
    use crate::ilp::DEFAULT_NODE_BUDGET;

    #[test]
    fn guess_count_single_hospital() {
        let inst = Instance::builder()
            .hospital("h", 1, Some(2))
            .resident("a", &["h"])
            .resident("b", &["h"])
            .build()
            .unwrap();
        assert_eq!(enumerate_guesses(&inst).count(), 1 + 2 * 2);
        let empty = Instance::builder().build().unwrap();
        assert_eq!(enumerate_guesses(&empty).count(), 1);
    }

    #[test]
    fn open_sets_by_size() {
        let inst = f4();
        let mut sizes: Vec<usize> = enumerate_guesses(&inst).map(|g| g.open.len()).collect();
        let sorted = {
            let mut s = sizes.clone();
            s.sort();
            s
        };
        assert_eq!(sizes, sorted);
        sizes.dedup();
        assert_eq!(sizes, vec![0, 1, 2, 3]);
    }

    fn f4_guess(inst: &Instance) -> Guess {
        let h = |s| inst.hospital_index(s).unwrap();
        let r = |s| inst.resident_index(s).unwrap();
        Guess {
            open: OpenSet::by_names(inst, &["h1", "h2"]).unwrap(),
            worst: BTreeMap::from([(h("h1"), r("r3")), (h("h2"), r("r2"))]),
            full: OpenSet::by_names(inst, &["h1", "h2"]).unwrap(),
        }
    }

    #[test]
    fn f4_guess_decodes_to_expected() {
        let inst = f4();
        let g = f4_guess(&inst);
        assert!(enumerate_guesses(&inst).any(|x| x == g));
        let model = build_hrqlut_model(&inst, &g).unwrap();
        let values = solve_naive(&model, DEFAULT_NODE_BUDGET).unwrap().unwrap();
        let m = decode_solution(&inst, &model, &values).unwrap();
        let expect = inst
            .matching(&[("h1", &["r3"]), ("h2", &["r1", "r2"])])
            .unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn malformed_guess() {
        let inst = f4();
        let mut g = f4_guess(&inst);
        let h1 = inst.hospital_index("h1").unwrap();
        let outsider = (0..inst.n()).find(|&r| !inst.mutually_acceptable(r, h1));
        if let Some(r) = outsider {
            g.worst.insert(h1, r);
            assert!(matches!(
                build_hrqlut_model(&inst, &g),
                Err(Error::RejectedInput(_))
            ));
        }
        let mut g = f4_guess(&inst);
        g.full = OpenSet::by_names(&inst, &["h3"]).unwrap();
        assert!(matches!(
            build_hrqlut_model(&inst, &g),
            Err(Error::RejectedInput(_))
        ));
    }

    #[test]
    fn fixtures() {
        assert_eq!(
            solve_hrqlut_xp(&f1(), Exec::Sequential, DEFAULT_NODE_BUDGET).unwrap(),
            None
        );
        let inst = f4();
        let m = solve_hrqlut_xp(&inst, Exec::Sequential, DEFAULT_NODE_BUDGET)
            .unwrap()
            .unwrap();
        assert!(check_stability(&inst, &m).unwrap().stable);
        let single = Instance::builder()
            .hospital("h", 1, Some(1))
            .resident("r", &["h"])
            .build()
            .unwrap();
        assert_eq!(
            solve_hrqlut_xp(&single, Exec::Sequential, 100)
                .unwrap()
                .unwrap()
                .assignment,
            vec![Some(0)]
        );
    }

    #[test]
    fn f1_empty_guess_is_infeasible() {
        let inst = f1();
        let g = Guess {
            open: OpenSet::new(inst.m(), &[]).unwrap(),
            worst: BTreeMap::new(),
            full: OpenSet::new(inst.m(), &[]).unwrap(),
        };
        let model = build_hrqlut_model(&inst, &g).unwrap();
        assert!(model.variables.is_empty());
        assert_eq!(solve_naive(&model, 10).unwrap(), None);
    }
}
