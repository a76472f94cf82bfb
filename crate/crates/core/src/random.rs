//! Seeded random instances for tests and benchmarks.

use crate::model::{HospitalPrefs, Instance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RandomParams {
    pub max_residents: usize,
    pub max_hospitals: usize,
    pub min_lower: usize,
    pub max_lower: usize,
    /// Probability that a hospital has no upper quota.
    pub unbounded: f64,
    /// Probability that two neighbouring entries of a list are tied.
    pub resident_ties: f64,
    pub hospital_ties: f64,
    pub indifferent: bool,
    /// Residents 1-3 put hospitals 1-3 first in cyclic order and those hospitals get lower
    /// quota two, which often leaves no stable matching.
    pub planted_cycle: bool,
}

impl RandomParams {
    /// Strict preferences, lower quotas up to `max_lower`, mixed upper quotas.
    pub fn strict(max_residents: usize, max_hospitals: usize, max_lower: usize) -> Self {
        RandomParams {
            max_residents,
            max_hospitals,
            min_lower: 1,
            max_lower,
            unbounded: 0.4,
            resident_ties: 0.0,
            hospital_ties: 0.0,
            indifferent: false,
            planted_cycle: false,
        }
    }

    pub fn no_upper(mut self) -> Self {
        self.unbounded = 1.0;
        self
    }

    pub fn with_ties(mut self, p: f64) -> Self {
        self.resident_ties = p;
        self.hospital_ties = p;
        self
    }

    pub fn house_allocation(mut self) -> Self {
        self.indifferent = true;
        self
    }

    /// Needs room for at least three agents on each side.
    pub fn planted_cycle(mut self) -> Self {
        assert!(self.max_residents >= 3 && self.max_hospitals >= 3);
        self.planted_cycle = true;
        self
    }
}

fn tie_groups<R: Rng>(rng: &mut R, items: Vec<usize>, p: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for x in items {
        match groups.last_mut() {
            Some(g) if rng.gen_bool(p) => g.push(x),
            _ => groups.push(vec![x]),
        }
    }
    groups
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// Random instance with between 1 and the maximum number of agents on each side and an
/// acceptability density drawn from {0.3, 0.5, 0.8}.
pub fn random_instance(seed: u64, p: &RandomParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let least = if p.planted_cycle { 3 } else { 1 };
    let n = rng.gen_range(least..=p.max_residents);
    let m = rng.gen_range(least..=p.max_hospitals);
    let density = *[0.3, 0.5, 0.8].choose(&mut rng).unwrap();
    let mut accept = vec![Vec::new(); n];
    for row in accept.iter_mut() {
        for h in 0..m {
            if rng.gen_bool(density) {
                row.push(h);
            }
        }
    }
    build(&mut rng, n, m, accept, p)
}

/// Large instance where every resident accepts `list_len` random hospitals.
pub fn random_large(seed: u64, n: usize, m: usize, list_len: usize, p: &RandomParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..m).collect();
    let accept: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut row: Vec<usize> = all
                .choose_multiple(&mut rng, list_len.min(m))
                .copied()
                .collect();
            row.sort_unstable();
            row
        })
        .collect();
    build(&mut rng, n, m, accept, p)
}

fn build(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    mut accept: Vec<Vec<usize>>,
    p: &RandomParams,
) -> Instance {
    if p.planted_cycle {
        for (r, row) in accept.iter_mut().enumerate().take(3) {
            for h in [r, (r + 1) % 3] {
                if !row.contains(&h) {
                    row.push(h);
                }
            }
        }
    }
    let mut acceptors = vec![Vec::new(); m];
    for (r, row) in accept.iter().enumerate() {
        for &h in row {
            acceptors[h].push(r);
        }
    }
    let resident_prefs = accept
        .into_iter()
        .enumerate()
        .map(|(r, mut row)| {
            row.shuffle(rng);
            if p.planted_cycle && r < 3 {
                let head = [r, (r + 1) % 3];
                row.retain(|h| !head.contains(h));
                row.splice(0..0, head);
            }
            tie_groups(rng, row, p.resident_ties)
        })
        .collect();
    let hospital_prefs = acceptors
        .into_iter()
        .map(|mut col| {
            col.shuffle(rng);
            if p.indifferent {
                col.sort_unstable();
                HospitalPrefs::Indifferent(col)
            } else {
                HospitalPrefs::Ranked(tie_groups(rng, col, p.hospital_ties))
            }
        })
        .collect();
    let lower: Vec<usize> = (0..m)
        .map(|h| {
            let l = rng.gen_range(p.min_lower..=p.max_lower);
            if p.planted_cycle && h < 3 {
                2
            } else {
                l
            }
        })
        .collect();
    let upper = lower
        .iter()
        .map(|&l| {
            if rng.gen_bool(p.unbounded) {
                None
            } else {
                Some(l + rng.gen_range(0..=2))
            }
        })
        .collect();
    Instance::new(
        names("r", n),
        names("h", m),
        lower,
        upper,
        resident_prefs,
        hospital_prefs,
    )
    .expect("generated instance is well formed")
}
