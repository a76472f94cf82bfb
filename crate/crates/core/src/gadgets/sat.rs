use crate::error::{Error, Result};
use crate::model::{Hospital, Instance, Matching, Resident};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// CNF formula with DIMACS-style literals: `v` for variable `v` (1-based), `-v` for its
/// negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Exactly three literals per clause and every variable exactly twice positive and twice
    /// negative.
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let f = CnfFormula::relaxed(vars, clauses)?;
        if let Some(c) = f.clauses.iter().find(|c| c.len() != 3) {
            return Err(Error::RejectedInput(format!(
                "clause {c:?} does not have three literals"
            )));
        }
        for v in 1..=vars {
            let (pos, neg) = f.occurrences(v);
            if pos != 2 || neg != 2 {
                return Err(Error::RejectedInput(format!(
                    "variable {v} occurs {pos} times positively and {neg} times negatively"
                )));
            }
        }
        Ok(f)
    }

    /// One to three literals per clause and at most two occurrences of each literal. The
    /// construction stays valid; clause hospitals take the clause size as lower quota.
    pub fn relaxed(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for c in &clauses {
            if c.is_empty() || c.len() > 3 {
                return Err(Error::RejectedInput(format!("clause {c:?} has bad size")));
            }
            for (i, &lit) in c.iter().enumerate() {
                if lit == 0 || lit.unsigned_abs() as usize > vars {
                    return Err(Error::RejectedInput(format!("literal {lit} out of range")));
                }
                if c[..i].contains(&lit) {
                    return Err(Error::RejectedInput(format!(
                        "literal {lit} repeated in {c:?}"
                    )));
                }
            }
        }
        let f = CnfFormula { vars, clauses };
        for v in 1..=vars {
            let (pos, neg) = f.occurrences(v);
            if pos > 2 || neg > 2 {
                return Err(Error::RejectedInput(format!(
                    "variable {v} occurs more than twice with one sign"
                )));
            }
        }
        Ok(f)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    fn occurrences(&self, v: usize) -> (usize, usize) {
        let all = self.clauses.iter().flatten();
        let pos = all.clone().filter(|&&l| l == v as i32).count();
        let neg = all.filter(|&&l| l == -(v as i32)).count();
        (pos, neg)
    }

    /// Clauses containing `lit`, in clause order.
    fn clauses_with(&self, lit: i32) -> Vec<usize> {
        (0..self.clauses.len())
            .filter(|&j| self.clauses[j].contains(&lit))
            .collect()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// First satisfying assignment in binary counting order.
    pub fn brute_force(&self) -> Option<Vec<bool>> {
        assert!(self.vars < 30, "truth table over {} variables", self.vars);
        (0..1u64 << self.vars)
            .map(|bits| {
                (0..self.vars)
                    .map(|i| bits >> i & 1 == 1)
                    .collect::<Vec<_>>()
            })
            .find(|a| self.satisfied_by(a))
    }

    /// Random formula meeting the strict occurrence pattern. `vars` must be a multiple of 3.
    pub fn random(seed: u64, vars: usize) -> Result<Self> {
        if vars == 0 || !vars.is_multiple_of(3) {
            return Err(Error::RejectedInput(format!(
                "{vars} variables cannot fill three-literal clauses with four occurrences each"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lits: Vec<i32> = (1..=vars as i32).flat_map(|v| [v, v, -v, -v]).collect();
        loop {
            lits.shuffle(&mut rng);
            let clauses: Vec<Vec<i32>> = lits.chunks(3).map(<[i32]>::to_vec).collect();
            if let Ok(f) = CnfFormula::new(vars, clauses) {
                return Ok(f);
            }
        }
    }
}

/// Generated instance with the agents of each variable block.
#[derive(Debug, Clone)]
pub struct SatGadget {
    pub instance: Instance,
    pub formula: CnfFormula,
    vars: Vec<VarBlock>,
}

#[derive(Debug, Clone, Copy)]
struct VarBlock {
    r: Resident,
    rbar: Resident,
    d1: Resident,
    d2: Resident,
    s_star: Resident,
    s1: Resident,
    s2: Resident,
    h: Hospital,
    hbar: Hospital,
    h_star: Hospital,
    hbar_star: Hospital,
    p3: Hospital,
}

/// Instance whose stable matchings correspond to satisfying assignments of `f`.
pub fn gen_sat(f: &CnfFormula) -> Result<SatGadget> {
    let mut b = Instance::builder();
    for i in 1..=f.vars {
        for (name, l) in [
            (format!("h{i}"), 3),
            (format!("hbar{i}"), 3),
            (format!("h{i}*"), 2),
            (format!("hbar{i}*"), 2),
            (format!("p{i}_1"), 2),
            (format!("p{i}_2"), 2),
            (format!("p{i}_3"), 2),
        ] {
            b = b.hospital(&name, l, None);
        }
    }
    for (j, c) in f.clauses.iter().enumerate() {
        b = b.hospital(&format!("c{}", j + 1), c.len(), None);
    }
    let clause = |j: usize| format!("c{}", j + 1);
    for i in 1..=f.vars {
        let v = i as i32;
        let mut r = vec![format!("h{i}")];
        r.extend(f.clauses_with(v).into_iter().map(clause));
        r.push(format!("h{i}*"));
        let mut rbar = vec![format!("hbar{i}")];
        rbar.extend(f.clauses_with(-v).into_iter().map(clause));
        rbar.push(format!("hbar{i}*"));
        b = b
            .resident(
                &format!("r{i}"),
                &r.iter().map(String::as_str).collect::<Vec<_>>(),
            )
            .resident(
                &format!("rbar{i}"),
                &rbar.iter().map(String::as_str).collect::<Vec<_>>(),
            )
            .resident(&format!("d{i}_1"), &[&format!("h{i}"), &format!("hbar{i}")])
            .resident(&format!("d{i}_2"), &[&format!("hbar{i}"), &format!("h{i}")])
            .resident(
                &format!("s{i}*"),
                &[
                    &format!("h{i}*"),
                    &format!("hbar{i}*"),
                    &format!("p{i}_1"),
                    &format!("p{i}_2"),
                ],
            )
            .resident(
                &format!("s{i}_1"),
                &[&format!("p{i}_2"), &format!("p{i}_3")],
            )
            .resident(
                &format!("s{i}_2"),
                &[&format!("p{i}_3"), &format!("p{i}_1")],
            );
    }
    let instance = b.build()?;
    let ri = |s: String| instance.resident_index(&s).expect("resident exists");
    let hi = |s: String| instance.hospital_index(&s).expect("hospital exists");
    let vars = (1..=f.vars)
        .map(|i| VarBlock {
            r: ri(format!("r{i}")),
            rbar: ri(format!("rbar{i}")),
            d1: ri(format!("d{i}_1")),
            d2: ri(format!("d{i}_2")),
            s_star: ri(format!("s{i}*")),
            s1: ri(format!("s{i}_1")),
            s2: ri(format!("s{i}_2")),
            h: hi(format!("h{i}")),
            hbar: hi(format!("hbar{i}")),
            h_star: hi(format!("h{i}*")),
            hbar_star: hi(format!("hbar{i}*")),
            p3: hi(format!("p{i}_3")),
        })
        .collect();
    Ok(SatGadget {
        instance,
        formula: f.clone(),
        vars,
    })
}

impl SatGadget {
    /// Matching built from a truth assignment; stable when the assignment satisfies the
    /// formula.
    pub fn matching_from_assignment(&self, assignment: &[bool]) -> Matching {
        let mut pairs = Vec::new();
        for (blk, &val) in self.vars.iter().zip(assignment) {
            let (open, star, star_res, top_res) = if val {
                (blk.h, blk.hbar_star, blk.rbar, blk.r)
            } else {
                (blk.hbar, blk.h_star, blk.r, blk.rbar)
            };
            pairs.extend([(top_res, open), (blk.d1, open), (blk.d2, open)]);
            pairs.extend([(star_res, star), (blk.s_star, star)]);
            pairs.extend([(blk.s1, blk.p3), (blk.s2, blk.p3)]);
        }
        Matching::from_pairs(self.instance.n(), &pairs)
    }

    /// Variable `i` is true unless its positive resident sits at its starred hospital.
    pub fn assignment_from_matching(&self, m: &Matching) -> Vec<bool> {
        self.vars
            .iter()
            .map(|blk| m.hospital_of(blk.r) != Some(blk.h_star))
            .collect()
    }
}
