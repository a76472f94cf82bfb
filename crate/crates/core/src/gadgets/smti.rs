use crate::error::{Error, Result};
use crate::model::{Hospital, Instance, Matching, Resident};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stable marriage with ties and incomplete lists. Each list is a sequence of tie groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smti {
    pub men: Vec<Vec<Vec<usize>>>,
    pub women: Vec<Vec<Vec<usize>>>,
}

fn rank(list: &[Vec<usize>], x: usize) -> Option<usize> {
    list.iter().position(|g| g.contains(&x))
}

impl Smti {
    pub fn new(men: Vec<Vec<Vec<usize>>>, women: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        for (side, lists, other) in [("man", &men, women.len()), ("woman", &women, men.len())] {
            for (i, l) in lists.iter().enumerate() {
                let mut seen: Vec<usize> = l.iter().flatten().copied().collect();
                if seen.iter().any(|&x| x >= other) || l.iter().any(Vec::is_empty) {
                    return Err(Error::RejectedInput(format!("{side} {i} has a bad list")));
                }
                seen.sort_unstable();
                if seen.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::RejectedInput(format!("{side} {i} repeats an entry")));
                }
            }
        }
        Ok(Smti { men, women })
    }

    pub fn mutually_acceptable(&self, m: usize, w: usize) -> bool {
        rank(&self.men[m], w).is_some() && rank(&self.women[w], m).is_some()
    }

    /// `husband[w]`-free check: no pair where both strictly improve.
    pub fn is_weakly_stable(&self, wife: &[Option<usize>]) -> bool {
        let mut husband = vec![None; self.women.len()];
        for (m, &w) in wife.iter().enumerate() {
            if let Some(w) = w {
                husband[w] = Some(m);
            }
        }
        (0..self.men.len()).all(|m| {
            (0..self.women.len()).all(|w| {
                if !self.mutually_acceptable(m, w) || wife[m] == Some(w) {
                    return true;
                }
                let man_gains =
                    wife[m].is_none_or(|cur| rank(&self.men[m], w) < rank(&self.men[m], cur));
                let woman_gains = husband[w]
                    .is_none_or(|cur| rank(&self.women[w], m) < rank(&self.women[w], cur));
                !(man_gains && woman_gains)
            })
        })
    }

    /// A weakly stable matching in which every man has a partner, by exhaustive search.
    pub fn brute_force_complete(&self) -> Option<Vec<Option<usize>>> {
        let mut wife = vec![None; self.men.len()];
        let mut taken = vec![false; self.women.len()];
        self.search(0, &mut wife, &mut taken).then_some(wife)
    }

    fn search(&self, m: usize, wife: &mut [Option<usize>], taken: &mut [bool]) -> bool {
        if m == self.men.len() {
            return self.is_weakly_stable(wife);
        }
        for w in 0..self.women.len() {
            if !taken[w] && self.mutually_acceptable(m, w) {
                taken[w] = true;
                wife[m] = Some(w);
                if self.search(m + 1, wife, taken) {
                    return true;
                }
                taken[w] = false;
                wife[m] = None;
            }
        }
        false
    }

    /// Random instance: each pair is acceptable to each side with probability `density`,
    /// and consecutive list entries tie with probability `tie`.
    pub fn random(seed: u64, men: usize, women: usize, density: f64, tie: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let list = |others: usize, rng: &mut ChaCha8Rng| {
            let mut picks: Vec<usize> = (0..others).filter(|_| rng.gen_bool(density)).collect();
            rand::seq::SliceRandom::shuffle(picks.as_mut_slice(), rng);
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for x in picks {
                match groups.last_mut() {
                    Some(g) if rng.gen_bool(tie) => g.push(x),
                    _ => groups.push(vec![x]),
                }
            }
            groups
        };
        let m = (0..men).map(|_| list(women, &mut rng)).collect();
        let w = (0..women).map(|_| list(men, &mut rng)).collect();
        Smti { men: m, women: w }
    }
}

#[derive(Debug, Clone)]
pub struct SmtiGadget {
    pub instance: Instance,
    pub source: Smti,
    man_res: Vec<Resident>,
    woman_res: Vec<Resident>,
    pair_h: Vec<Vec<Option<Hospital>>>,
    // r*, r', r'', r''' and h*, h, h', h'' per man.
    penal_res: Vec<[Resident; 4]>,
    penal_h: Vec<[Hospital; 4]>,
}

/// Instance with lower quota 2 everywhere whose stable matchings correspond to weakly stable
/// matchings of `s` that match every man.
pub fn gen_smti(s: &Smti) -> Result<SmtiGadget> {
    let (nm, nw) = (s.men.len(), s.women.len());
    let pair = |m: usize, w: usize| format!("h[m{},w{}]", m + 1, w + 1);
    let mut b = Instance::builder();
    for m in 0..nm {
        for w in (0..nw).filter(|&w| s.mutually_acceptable(m, w)) {
            b = b.hospital(&pair(m, w), 2, None);
        }
    }
    for m in 1..=nm {
        for h in ["h*", "h", "h'", "h''"] {
            b = b.hospital(&format!("{h}[m{m}]"), 2, None);
        }
    }
    for m in 0..nm {
        let mut groups: Vec<Vec<String>> = s.men[m]
            .iter()
            .map(|g| {
                g.iter()
                    .filter(|&&w| s.mutually_acceptable(m, w))
                    .map(|&w| pair(m, w))
                    .collect::<Vec<_>>()
            })
            .filter(|g| !g.is_empty())
            .collect();
        groups.push(vec![format!("h*[m{}]", m + 1)]);
        let refs: Vec<Vec<&str>> = groups
            .iter()
            .map(|g| g.iter().map(String::as_str).collect())
            .collect();
        let refs: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
        b = b.resident_ties(&format!("r[m{}]", m + 1), &refs);
    }
    for w in 0..nw {
        let groups: Vec<Vec<String>> = s.women[w]
            .iter()
            .map(|g| {
                g.iter()
                    .filter(|&&m| s.mutually_acceptable(m, w))
                    .map(|&m| pair(m, w))
                    .collect::<Vec<_>>()
            })
            .filter(|g| !g.is_empty())
            .collect();
        let refs: Vec<Vec<&str>> = groups
            .iter()
            .map(|g| g.iter().map(String::as_str).collect())
            .collect();
        let refs: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
        b = b.resident_ties(&format!("r[w{}]", w + 1), &refs);
    }
    for m in 1..=nm {
        let h = |x: &str| format!("{x}[m{m}]");
        b = b
            .resident(&h("r*"), &[&h("h*"), &h("h")])
            .resident(&h("r'"), &[&h("h"), &h("h'")])
            .resident(&h("r''"), &[&h("h'"), &h("h''")])
            .resident(&h("r'''"), &[&h("h''"), &h("h")]);
    }
    let instance = b.build()?;
    let ri = |s: String| instance.resident_index(&s).expect("resident exists");
    let hi = |s: String| instance.hospital_index(&s);
    Ok(SmtiGadget {
        man_res: (1..=nm).map(|m| ri(format!("r[m{m}]"))).collect(),
        woman_res: (1..=nw).map(|w| ri(format!("r[w{w}]"))).collect(),
        pair_h: (0..nm)
            .map(|m| (0..nw).map(|w| hi(pair(m, w))).collect())
            .collect(),
        penal_res: (1..=nm)
            .map(|m| ["r*", "r'", "r''", "r'''"].map(|x| ri(format!("{x}[m{m}]"))))
            .collect(),
        penal_h: (1..=nm)
            .map(|m| ["h*", "h", "h'", "h''"].map(|x| hi(format!("{x}[m{m}]")).expect("exists")))
            .collect(),
        source: s.clone(),
        instance,
    })
}

impl SmtiGadget {
    /// Matching for a source matching given as `wife[m]`; stable when the source matching is
    /// weakly stable and matches every man.
    pub fn matching_from_source(&self, wife: &[Option<usize>]) -> Matching {
        let mut pairs = Vec::new();
        for (m, w) in wife.iter().enumerate() {
            let [rs, r1, r2, r3] = self.penal_res[m];
            let [_, h, _, h2] = self.penal_h[m];
            if let Some(w) = *w {
                let hp = self.pair_h[m][w].expect("matched pair is acceptable");
                pairs.extend([(self.man_res[m], hp), (self.woman_res[w], hp)]);
            }
            pairs.extend([(rs, h), (r1, h), (r2, h2), (r3, h2)]);
        }
        Matching::from_pairs(self.instance.n(), &pairs)
    }

    /// Pairs whose hospital is open, as `wife[m]`.
    pub fn source_from_matching(&self, m: &Matching) -> Vec<Option<usize>> {
        let counts = m.counts(self.instance.m());
        self.pair_h
            .iter()
            .map(|row| row.iter().position(|h| h.is_some_and(|h| counts[h] > 0)))
            .collect()
    }
}
