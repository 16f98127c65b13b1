use std::collections::HashMap;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::locality::combinations;
use crate::perm::{enumerate_sn, Permutation};
use crate::set::{ConstructionId, PermSet};

/// Result of looking for a large locality-`d` subset of S_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A subset of exactly the target size, with the helper set used at each position.
    Witness {
        set: PermSet,
        helpers: Vec<Vec<usize>>,
    },
    /// No helper-set assignment admits a subset of the target size.
    Exhausted { assignments: u64, nodes: u64 },
}

struct Budget {
    nodes: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            Err(Error::SearchBudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Branch and bound for an independent set of size `target` among `cands`.
fn independent_set(
    adj: &[u128],
    cands: u128,
    chosen: u128,
    size: u32,
    target: u32,
    budget: &mut Budget,
) -> Result<Option<u128>> {
    budget.tick()?;
    if size >= target {
        return Ok(Some(chosen));
    }
    if size + cands.count_ones() < target {
        return Ok(None);
    }
    // Branch on the candidate with the fewest conflicts among the candidates.
    let mut best = cands.trailing_zeros() as usize;
    let mut best_deg = u32::MAX;
    let mut rest = cands;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[v] & cands).count_ones();
        if deg < best_deg {
            best = v;
            best_deg = deg;
        }
    }
    let bit = 1u128 << best;
    if let Some(s) = independent_set(
        adj,
        cands & !adj[best] & !bit,
        chosen | bit,
        size + 1,
        target,
        budget,
    )? {
        return Ok(Some(s));
    }
    if best_deg == 0 {
        // Taking a conflict-free vertex is never worse than skipping it.
        return Ok(None);
    }
    independent_set(adj, cands & !bit, chosen, size, target, budget)
}

/// Conflict rows for one position and helper set: members agreeing on the
/// helpers but not on the position cannot coexist.
fn conflicts(perms: &[Permutation], pos: usize, helpers: &[usize]) -> Vec<u128> {
    let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (idx, p) in perms.iter().enumerate() {
        let key = helpers.iter().map(|&j| p.get(j)).collect();
        groups.entry(key).or_default().push(idx);
    }
    let mut rows = vec![0u128; perms.len()];
    for members in groups.values() {
        for &a in members {
            for &b in members {
                if perms[a].get(pos) != perms[b].get(pos) {
                    rows[a] |= 1u128 << b;
                }
            }
        }
    }
    rows
}

/// Searches S_n for a `target`-member set with fixed-helper-set locality `d`.
///
/// Every assignment of a `d`-subset helper set to each position is tried;
/// larger helper sets never help because determination is monotone.
pub fn max_set_search(n: usize, d: usize, target: usize, caps: &Caps) -> Result<SearchOutcome> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > caps.search_n || n > 5 {
        return Err(Error::cap(
            format!("maximal-set search over S_{n}"),
            caps.search_n.min(5) as u128,
        ));
    }
    let d = d.min(n - 1);
    let perms: Vec<Permutation> = enumerate_sn(n, caps)?.collect();
    let mut budget = Budget {
        nodes: 0,
        limit: caps.search_nodes,
    };
    if target > perms.len() {
        return Ok(SearchOutcome::Exhausted {
            assignments: 0,
            nodes: 0,
        });
    }

    let options: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            combinations(&others, d)
        })
        .collect();
    let rows: Vec<Vec<Vec<u128>>> = options
        .iter()
        .enumerate()
        .map(|(i, opts)| opts.iter().map(|h| conflicts(&perms, i, h)).collect())
        .collect();

    let all: u128 = if perms.len() == 128 {
        u128::MAX
    } else {
        (1u128 << perms.len()) - 1
    };
    let mut choice = vec![0usize; n];
    let mut assignments = 0u64;
    loop {
        assignments += 1;
        let mut adj = vec![0u128; perms.len()];
        for (i, &c) in choice.iter().enumerate() {
            for (a, row) in adj.iter_mut().zip(&rows[i][c]) {
                *a |= row;
            }
        }
        if let Some(found) = independent_set(&adj, all, 0, 0, target as u32, &mut budget)? {
            let members = (0..perms.len())
                .filter(|&k| found >> k & 1 == 1)
                .map(|k| perms[k].clone())
                .collect();
            let set = PermSet::new(n, members, ConstructionId::Custom, Some(d))?;
            let helpers = choice
                .iter()
                .enumerate()
                .map(|(i, &c)| options[i][c].clone())
                .collect();
            return Ok(SearchOutcome::Witness { set, helpers });
        }
        // Advance the mixed-radix helper assignment.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(SearchOutcome::Exhausted {
                    assignments,
                    nodes: budget.nodes,
                });
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}
