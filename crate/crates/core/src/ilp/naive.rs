use super::{IlpModel, Relation};
use crate::error::{Error, Result};
use std::collections::VecDeque;

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

struct Row {
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

struct Search<'a> {
    rows: Vec<Row>,
    occurs: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
    model: &'a IlpModel,
}

impl Search<'_> {
    /// Bound tightening until fixpoint; false on an empty domain or violated row.
    fn propagate(
        &self,
        lo: &mut [i64],
        hi: &mut [i64],
        seeds: impl Iterator<Item = usize>,
    ) -> bool {
        let mut queue: VecDeque<usize> = seeds.collect();
        let mut queued = vec![false; self.rows.len()];
        for &r in &queue {
            queued[r] = true;
        }
        while let Some(ri) = queue.pop_front() {
            queued[ri] = false;
            let row = &self.rows[ri];
            // Tightening only moves the bound that does not enter a term's minimum, so
            // these stay exact while the row is processed.
            let mins: Vec<i64> = row
                .terms
                .iter()
                .map(|&(v, a)| if a > 0 { a * lo[v] } else { a * hi[v] })
                .collect();
            let min_act: i64 = mins.iter().sum();
            if min_act > row.rhs {
                return false;
            }
            for (&(v, a), &own) in row.terms.iter().zip(&mins) {
                let slack = row.rhs - (min_act - own);
                let changed = if a > 0 {
                    let bound = floor_div(slack, a);
                    if bound < hi[v] {
                        hi[v] = bound;
                        true
                    } else {
                        false
                    }
                } else {
                    let bound = ceil_div(slack, a);
                    if bound > lo[v] {
                        lo[v] = bound;
                        true
                    } else {
                        false
                    }
                };
                if changed {
                    if lo[v] > hi[v] {
                        return false;
                    }
                    for &other in &self.occurs[v] {
                        if !queued[other] {
                            queued[other] = true;
                            queue.push_back(other);
                        }
                    }
                }
            }
        }
        true
    }

    fn dfs(&mut self, lo: Vec<i64>, hi: Vec<i64>) -> Result<Option<Vec<i64>>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SolverBudget(self.budget));
        }
        let Some(v) = (0..lo.len()).find(|&v| lo[v] < hi[v]) else {
            return Ok(Some(lo));
        };
        for value in lo[v]..=hi[v] {
            let mut l = lo.clone();
            let mut h = hi.clone();
            l[v] = value;
            h[v] = value;
            if !self.propagate(&mut l, &mut h, self.occurs[v].clone().into_iter()) {
                continue;
            }
            if let Some(sol) = self.dfs(l, h)? {
                return Ok(Some(sol));
            }
        }
        Ok(None)
    }
}

/// Exact feasibility by depth-first search over variables in declaration order, smallest
/// value first, with interval propagation at every node. `node_budget` caps the number of
/// search nodes.
pub fn solve_naive(model: &IlpModel, node_budget: u64) -> Result<Option<Vec<i64>>> {
    let mut rows = Vec::new();
    for c in &model.constraints {
        let neg: Vec<(usize, i64)> = c.terms.iter().map(|&(v, a)| (v, -a)).collect();
        match c.relation {
            Relation::Le => rows.push(Row {
                terms: c.terms.clone(),
                rhs: c.rhs,
            }),
            Relation::Ge => rows.push(Row {
                terms: neg,
                rhs: -c.rhs,
            }),
            Relation::Eq => {
                rows.push(Row {
                    terms: c.terms.clone(),
                    rhs: c.rhs,
                });
                rows.push(Row {
                    terms: neg,
                    rhs: -c.rhs,
                });
            }
        }
    }
    let mut occurs = vec![Vec::new(); model.variables.len()];
    for (i, row) in rows.iter().enumerate() {
        for &(v, _) in &row.terms {
            occurs[v].push(i);
        }
    }
    let mut lo: Vec<i64> = model.variables.iter().map(|v| v.lower).collect();
    let mut hi: Vec<i64> = model.variables.iter().map(|v| v.upper).collect();
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Ok(None);
    }
    let mut search = Search {
        rows,
        occurs,
        nodes: 0,
        budget: node_budget,
        model,
    };
    if !search.propagate(&mut lo, &mut hi, 0..search.rows.len()) {
        return Ok(None);
    }
    let sol = search.dfs(lo, hi)?;
    debug_assert!(sol.as_ref().is_none_or(|s| search.model.satisfied_by(s)));
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::super::{IlpModel, Relation, VarRole};
    use super::*;

    fn one_var(lo: i64, hi: i64, cons: &[(Relation, i64)]) -> IlpModel {
        let mut m = IlpModel::default();
        let x = m.add_var("x".into(), lo, hi, VarRole::Open(0));
        for (i, &(rel, rhs)) in cons.iter().enumerate() {
            m.add(format!("c{i}"), &[(x, 1)], rel, rhs);
        }
        m
    }

    #[test]
    fn tiny_models() {
        let m = one_var(0, 2, &[(Relation::Ge, 1), (Relation::Le, 1)]);
        assert_eq!(solve_naive(&m, 100).unwrap(), Some(vec![1]));
        let m = one_var(0, 1, &[(Relation::Ge, 2)]);
        assert_eq!(solve_naive(&m, 100).unwrap(), None);
        assert_eq!(
            solve_naive(&IlpModel::default(), 100).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(floor_div(7, 2), 3);
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(floor_div(7, -2), -4);
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(-7, -2), 4);
    }

    #[test]
    fn budget_exhaustion() {
        // 2 * (x0 + .. + x11) = 13 has no integer solution, and bounds propagation only
        // notices once nearly every variable is fixed.
        let mut m = IlpModel::default();
        let xs: Vec<usize> = (0..12)
            .map(|i| m.add_var(format!("x{i}"), 0, 1, VarRole::Open(i)))
            .collect();
        let terms: Vec<(usize, i64)> = xs.iter().map(|&x| (x, 2)).collect();
        m.add("odd".into(), &terms, Relation::Eq, 13);
        assert!(matches!(solve_naive(&m, 50), Err(Error::SolverBudget(50))));
        assert_eq!(solve_naive(&m, 1_000_000).unwrap(), None);
    }
}
