//! The ordering predicate on contraction graphs.
//!
//! A term is ordered when its factors can be listed so that each factor's
//! upper indices are contracted only with derivatives standing strictly to
//! its right: on later factors or on the arguments. That is a topological
//! order of the graph with an edge `f → g` whenever `f` contracts into `g`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::term::{AbstractTerm, Arrangement, Target};

/// Lexicographically least ordered arrangement, if one exists.
pub fn opo_arrangement(t: &AbstractTerm) -> Option<Arrangement> {
    let n = t.factors.len();
    let mut indegree = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (f, fac) in t.factors.iter().enumerate() {
        for target in fac.upper {
            if let Target::Factor(g) = target {
                if g == f {
                    return None;
                }
                succ[f].push(g);
                indegree[g] += 1;
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&f| indegree[f] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(f)) = ready.pop() {
        order.push(f);
        for &g in &succ[f] {
            indegree[g] -= 1;
            if indegree[g] == 0 {
                ready.push(Reverse(g));
            }
        }
    }
    (order.len() == n).then_some(Arrangement(order))
}

pub fn is_opo(t: &AbstractTerm) -> bool {
    opo_arrangement(t).is_some()
}

/// Whether the factors, in their stored order, already contract rightward.
pub fn is_ordered_as_written(t: &AbstractTerm) -> bool {
    t.factors.iter().enumerate().all(|(f, fac)| {
        fac.upper.iter().all(|target| match target {
            Target::Factor(g) => *g > f,
            Target::Arg(_) => true,
        })
    })
}
