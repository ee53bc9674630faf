//! Breadth-first enumeration of products of generators, deduplicated by
//! element value.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::platform::Element;
use crate::word::Letter;

/// Abort above this many enumerated states.
pub const ENUMERATION_GUARD: usize = 1 << 24;

/// Outcome of a bounded search: a witness if found, and how many
/// candidates were examined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Search<T> {
    pub witness: Option<T>,
    pub work: u64,
}

impl<T> Search<T> {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        Search { witness: self.witness.map(f), work: self.work }
    }
}

pub(crate) fn guard_check(states: u128, what: &str) -> Result<()> {
    if states > ENUMERATION_GUARD as u128 {
        return Err(Error::Bound(format!("{what}: {states} candidates exceed the guard of {ENUMERATION_GUARD}")));
    }
    Ok(())
}

/// Number of reduced words of length `0..=len` over `rank` generators.
pub(crate) fn reduced_word_count(rank: usize, len: usize) -> u128 {
    if rank == 0 {
        return 1;
    }
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * rank as u128;
    for _ in 0..len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * rank as u128 - 1);
    }
    total
}

/// Breadth-first ball of `start · g_{i1} ⋯ g_{is}`, `s ≤ max_len`.
///
/// Letters are `1..=k` for the generators and, with `inverses`, `-1..=-k` for
/// their inverses, ordered `1, -1, 2, -2, …`. Each element is kept at its
/// lexicographically first shortest expression.
pub(crate) struct Ball {
    nodes: Vec<(Element, usize, Letter)>,
}

impl Ball {
    /// Enumerates until `stop` returns true for some node; returns the index
    /// of that node. The guard applies to stored states.
    pub fn explore(
        start: &Element,
        gens: &[Element],
        inverses: bool,
        max_len: usize,
        mut stop: impl FnMut(&Element) -> bool,
    ) -> Result<(Ball, Option<usize>)> {
        let mut steps: Vec<(Letter, Element)> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            steps.push((i as Letter + 1, g.clone()));
            if inverses {
                steps.push((-(i as Letter) - 1, g.inv()));
            }
        }
        let mut ball = Ball { nodes: vec![(start.clone(), usize::MAX, 0)] };
        let mut seen: HashSet<Element> = HashSet::from([start.clone()]);
        if stop(start) {
            return Ok((ball, Some(0)));
        }
        let mut layer = 0..1;
        for _ in 0..max_len {
            let next_start = ball.nodes.len();
            for parent in layer.clone() {
                for (l, g) in &steps {
                    let e = ball.nodes[parent].0.mul(g);
                    if !seen.insert(e.clone()) {
                        continue;
                    }
                    ball.nodes.push((e, parent, *l));
                    guard_check(ball.nodes.len() as u128, "breadth-first search")?;
                    let idx = ball.nodes.len() - 1;
                    if stop(&ball.nodes[idx].0) {
                        return Ok((ball, Some(idx)));
                    }
                }
            }
            if ball.nodes.len() == next_start {
                break;
            }
            layer = next_start..ball.nodes.len();
        }
        Ok((ball, None))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn element(&self, idx: usize) -> &Element {
        &self.nodes[idx].0
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.nodes.iter().map(|n| &n.0)
    }

    /// Expression leading to node `idx`.
    pub fn path(&self, mut idx: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        while self.nodes[idx].1 != usize::MAX {
            out.push(self.nodes[idx].2);
            idx = self.nodes[idx].1;
        }
        out.reverse();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::Platform;

    #[test]
    fn ball_of_cyclic_group() {
        let pf = Platform::cyclic(23, 5).unwrap();
        let g = pf.generators();
        let (ball, hit) = Ball::explore(&pf.identity(), &g, false, 30, |_| false).unwrap();
        assert!(hit.is_none());
        assert_eq!(ball.len(), 22);
        let (ball, hit) = Ball::explore(&pf.identity(), &g, true, 30, |e| e == &g[0].inv()).unwrap();
        assert_eq!(ball.path(hit.unwrap()), vec![-1]);
    }

    #[test]
    fn reduced_counts() {
        assert_eq!(reduced_word_count(2, 0), 1);
        assert_eq!(reduced_word_count(2, 2), 1 + 4 + 12);
        assert_eq!(reduced_word_count(0, 5), 1);
    }
}
