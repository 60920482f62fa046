//! Reordering of a label sequence by swaps of commuting neighbours.
//!
//! Two labels that do not commute can never pass each other, so the orders
//! reachable from a state are exactly the linear extensions of the partial
//! order "x precedes y in the state and x, y do not commute". Both routines
//! below compute a target linear extension directly and then realise it by
//! bubbling elements left, which only ever exchanges commuting neighbours.

use super::Step;
use crate::combinat::Label;
use crate::error::{Error, Result};

fn blocked(a: &Label, b: &Label) -> bool {
    (a.mask() | b.mask()).count_ones() as usize != a.ambient()
}

fn show(state: &[Label]) -> String {
    state.iter().map(|l| format!("({l})")).collect::<Vec<_>>().join(" ")
}

fn bubble_to(state: &mut [Label], steps: &mut Vec<Step>, target: &[Label], context: &str) -> Result<()> {
    for (t, want) in target.iter().enumerate() {
        let mut c = t + state[t..].iter().position(|l| l == want).expect("permutation");
        while c > t {
            if blocked(&state[c - 1], &state[c]) {
                return Err(Error::Routing { context: context.to_string(), state: show(state) });
            }
            state.swap(c - 1, c);
            steps.push(Step::Swap(c));
            c -= 1;
        }
    }
    Ok(())
}

/// Makes `block` a contiguous run of `state`, in the given order, moving as
/// few unrelated labels as the dependency structure allows.
pub(super) fn gather(state: &mut [Label], steps: &mut Vec<Step>, block: &[Label], context: &str) -> Result<()> {
    let err = |s: &[Label]| Error::Routing { context: context.to_string(), state: show(s) };
    let mut pos = Vec::with_capacity(block.len());
    for b in block {
        pos.push(state.iter().position(|l| l == b).ok_or_else(|| err(state))?);
    }
    if pos.windows(2).any(|w| w[0] >= w[1]) {
        return Err(err(state));
    }
    let m = state.len();
    let in_block: Vec<bool> = (0..m).map(|i| pos.contains(&i)).collect();
    // Labels that must stay before some block member.
    let mut before = vec![false; m];
    for i in (0..m).rev() {
        if !in_block[i] {
            before[i] = (i + 1..m).any(|j| (in_block[j] || before[j]) && blocked(&state[i], &state[j]));
        }
    }
    // Labels that must stay after some block member.
    let mut after = vec![false; m];
    for i in 0..m {
        if !in_block[i] {
            after[i] = (0..i).any(|j| (in_block[j] || after[j]) && blocked(&state[j], &state[i]));
        }
    }
    if (0..m).any(|i| before[i] && after[i]) {
        return Err(err(state));
    }
    let first = pos[0];
    let lead = |i: usize| !in_block[i] && (before[i] || (!after[i] && i < first));
    let mut target: Vec<Label> = (0..m).filter(|&i| lead(i)).map(|i| state[i].clone()).collect();
    target.extend(block.iter().cloned());
    target.extend((0..m).filter(|&i| !in_block[i] && !lead(i)).map(|i| state[i].clone()));
    bubble_to(state, steps, &target, context)
}

/// Permutes `state` into `target` by legal swaps.
pub(super) fn arrange(state: &mut [Label], steps: &mut Vec<Step>, target: &[Label]) -> Result<()> {
    let mut a: Vec<&Label> = state.iter().collect();
    let mut b: Vec<&Label> = target.iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::Routing { context: "final order".into(), state: show(state) });
    }
    bubble_to(state, steps, target, "final order")
}
