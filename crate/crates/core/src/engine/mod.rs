//! Carriers, maps and the program interpreter.
//!
//! All three kinds of map (single finite tables, multi-sorted labeled
//! systems, exact rational point maps) run through one interpreter,
//! [`execute`], parameterised by a [`MapFamily`].

mod finite;
mod labeled;
mod point;
pub mod tuple;

pub use finite::{all_maps, random_map, FiniteMap};
pub use labeled::{LabeledSystem, SortedMap};
pub use point::{PointMap, Rational};

use crate::combinat::Label;
use crate::eqcompiler::{map_arity, Program, Step};
use crate::error::{Error, Result};

/// Something that can serve every `Apply` step of a program.
pub trait MapFamily {
    type Value: Clone;

    /// Applies the map for index `k` (absent for single-map programs).
    fn apply(&self, k: Option<&Label>, args: &[Self::Value]) -> Result<Vec<Self::Value>>;
}

impl MapFamily for FiniteMap {
    type Value = u32;

    fn apply(&self, _k: Option<&Label>, args: &[u32]) -> Result<Vec<u32>> {
        FiniteMap::apply(self, args).map(<[u32]>::to_vec)
    }
}

/// Runs `p` on `input`, checking positions and arities along the way.
pub fn execute<M: MapFamily>(p: &Program, maps: &M, input: &[M::Value]) -> Result<Vec<M::Value>> {
    if input.len() != p.inputs.len() {
        return Err(Error::Arity { expected: p.inputs.len().to_string(), got: input.len().to_string() });
    }
    let (k_in, _) = map_arity(p.n, p.dual);
    let mut state = input.to_vec();
    for (i, step) in p.steps.iter().enumerate() {
        match step {
            Step::Swap(pos) => {
                if *pos == 0 || *pos >= state.len() {
                    return Err(Error::MalformedProgram(format!("step {i}: swap at {pos} of {}", state.len())));
                }
                state.swap(pos - 1, *pos);
            }
            Step::Apply { k, pos } => {
                if *pos == 0 || pos - 1 + k_in > state.len() {
                    return Err(Error::MalformedProgram(format!("step {i}: apply at {pos} of {}", state.len())));
                }
                let out = maps.apply(k.as_ref(), &state[pos - 1..pos - 1 + k_in])?;
                state.splice(pos - 1..pos - 1 + k_in, out);
            }
        }
    }
    if state.len() != p.outputs.len() {
        return Err(Error::MalformedProgram(format!(
            "ends with {} slots, expected {}",
            state.len(),
            p.outputs.len()
        )));
    }
    Ok(state)
}

fn check_arity(p: &Program, k_in: usize, k_out: usize) -> Result<()> {
    let expected = map_arity(p.n, p.dual);
    if expected != (k_in, k_out) {
        return Err(Error::Arity { expected: format!("{expected:?}"), got: format!("{:?}", (k_in, k_out)) });
    }
    Ok(())
}

/// Runs a program with one finite map at every step.
pub fn eval_single(p: &Program, t: &FiniteMap, input: &[u32]) -> Result<Vec<u32>> {
    check_arity(p, t.k_in(), t.k_out())?;
    execute(p, t, input)
}

/// Runs a program with the map `T_K` of `sys` at each step indexed by `K`.
pub fn eval_labeled(p: &Program, sys: &LabeledSystem, input: &[u32]) -> Result<Vec<u32>> {
    if (p.n, p.dual) != (sys.ambient(), sys.dual()) {
        return Err(Error::Arity {
            expected: format!("N={}, dual={}", p.n, p.dual),
            got: format!("N={}, dual={}", sys.ambient(), sys.dual()),
        });
    }
    for (j, &x) in p.inputs.iter().zip(input) {
        if x >= sys.carrier(j) {
            return Err(Error::Carrier(format!("value {x} outside U_{j} of size {}", sys.carrier(j))));
        }
    }
    execute(p, sys, input)
}

/// Runs a program on exact rationals.
pub fn eval_point(p: &Program, t: &PointMap, input: &[Rational]) -> Result<Vec<Rational>> {
    check_arity(p, t.k_in(), t.k_out())?;
    t.check_domain(input)?;
    execute(p, t, input)
}

/// Applies `t` at 1-based slot `pos` of `state`.
pub fn compose_tuple(t: &FiniteMap, pos: usize, state: &[u32]) -> Result<Vec<u32>> {
    if pos == 0 || pos - 1 + t.k_in() > state.len() {
        return Err(Error::MalformedProgram(format!("apply at {pos} of {}", state.len())));
    }
    let mut out = state.to_vec();
    out.splice(pos - 1..pos - 1 + t.k_in(), t.apply(&state[pos - 1..pos - 1 + t.k_in()])?.iter().copied());
    Ok(out)
}
