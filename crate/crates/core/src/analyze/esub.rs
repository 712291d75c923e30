//! Proper-subdivision check: does every edge type eventually split?
//!
//! Edges whose word is a single entry form a functional graph; an edge
//! splits at some level exactly when its chain reaches an edge whose
//! word has two or more entries. A cycle traps its chain forever.

use super::{Property, PropertyVerdict, Witness};
use crate::model::Rule;

pub fn check_esub(rule: &Rule) -> PropertyVerdict {
    let spec = &rule.spec;
    let ne = spec.edges.len();
    let succ: Vec<Option<usize>> = spec
        .edges
        .iter()
        .map(|e| {
            if e.word.images.len() == 1 {
                Some(e.word.images[0].edge)
            } else {
                None
            }
        })
        .collect();

    // split_level[e]: first n with more than one subedge; None on a chain
    // that enters a cycle (or is the cycle)
    let mut split_level: Vec<Option<u32>> = vec![None; ne];
    let mut state = vec![0u8; ne]; // 0 new, 1 on current walk, 2 settled
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..ne {
        if state[start] == 2 {
            continue;
        }
        let mut path = Vec::new();
        let mut at = start;
        loop {
            if state[at] == 1 {
                let pos = path.iter().position(|&x| x == at).unwrap();
                cycles.push(path[pos..].to_vec());
                break;
            }
            if state[at] == 2 {
                break;
            }
            state[at] = 1;
            path.push(at);
            match succ[at] {
                None => {
                    split_level[at] = Some(1);
                    break;
                }
                Some(next) => at = next,
            }
        }
        for &e in path.iter().rev() {
            state[e] = 2;
            if split_level[e].is_none() {
                split_level[e] = succ[e].and_then(|n| split_level[n]).map(|l| l + 1);
            }
        }
    }

    if cycles.is_empty() {
        let certified = (0..ne).map(|e| split_level[e].unwrap()).max().unwrap_or(1);
        PropertyVerdict {
            property: Property::Esub,
            holds: true,
            witness: None,
            certified_level: Some(certified),
        }
    } else {
        // cycles in a functional graph are disjoint; pick the one with the
        // smallest member and start the listing there
        let mut cycle = cycles
            .into_iter()
            .min_by_key(|c| c.iter().copied().min())
            .unwrap();
        let at = cycle
            .iter()
            .enumerate()
            .min_by_key(|&(_, &e)| e)
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(at);
        PropertyVerdict {
            property: Property::Esub,
            holds: false,
            witness: Some(Witness::EdgeCycle { edges: cycle }),
            certified_level: None,
        }
    }
}
