//! Deciding whether a candidate solves a (dual) N-gon equation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{self, tuple, FiniteMap, LabeledSystem, PointMap, Rational};
use crate::eqcompiler::{compiled, map_arity, Program, Step};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample<V> {
    pub input: Vec<V>,
    pub lhs: Vec<V>,
    pub rhs: Vec<V>,
}

/// Outcome of a check. `inputs_checked` counts up to and including the
/// counterexample, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict<V = u32> {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample<V>>,
    pub inputs_checked: u64,
}

impl<V> Verdict<V> {
    fn pass(inputs_checked: u64) -> Self {
        Verdict { holds: true, counterexample: None, inputs_checked }
    }

    fn fail(inputs_checked: u64, input: Vec<V>, lhs: Vec<V>, rhs: Vec<V>) -> Self {
        Verdict { holds: false, counterexample: Some(Counterexample { input, lhs, rhs }), inputs_checked }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Swap(usize),
    Apply(usize),
}

/// A program lowered for repeated execution with one finite map.
struct Lowered {
    ops: Vec<Op>,
    inputs: usize,
}

impl Lowered {
    fn new(p: &Program, t: &FiniteMap) -> Result<Self> {
        // One checked run validates every position for all later runs.
        engine::eval_single(p, t, &vec![0; p.inputs.len()])?;
        let ops = p
            .steps
            .iter()
            .map(|s| match s {
                Step::Swap(pos) => Op::Swap(pos - 1),
                Step::Apply { pos, .. } => Op::Apply(pos - 1),
            })
            .collect();
        Ok(Lowered { ops, inputs: p.inputs.len() })
    }

    fn run(&self, t: &FiniteMap, input: &[u32], state: &mut Vec<u32>) {
        let k = t.k_in();
        state.clear();
        state.extend_from_slice(input);
        for op in &self.ops {
            match *op {
                Op::Swap(p) => state.swap(p, p + 1),
                Op::Apply(p) => {
                    let row = tuple::encode(&state[p..p + k], t.q());
                    state.splice(p..p + k, t.row(row).iter().copied());
                }
            }
        }
    }
}

fn check_arity(n: usize, dual: bool, t: &FiniteMap) -> Result<()> {
    let expected = map_arity(n, dual);
    if t.arity() != expected {
        return Err(Error::Arity { expected: format!("{expected:?}"), got: format!("{:?}", t.arity()) });
    }
    Ok(())
}

fn input_count(q: u32, m: usize) -> Result<u64> {
    tuple::count(q, m)
        .map(|c| c as u64)
        .ok_or(Error::Budget { estimate: (q as f64).powi(m as i32), budget: u64::MAX })
}

fn check_lowered(lhs: &Lowered, rhs: &Lowered, t: &FiniteMap) -> Verdict {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut checked = 0;
    for input in tuple::Odometer::uniform(t.q(), lhs.inputs) {
        checked += 1;
        lhs.run(t, &input, &mut a);
        rhs.run(t, &input, &mut b);
        if a != b {
            return Verdict::fail(checked, input, a, b);
        }
    }
    Verdict::pass(checked)
}

fn check_lowered_par(lhs: &Lowered, rhs: &Lowered, t: &FiniteMap) -> Result<Verdict> {
    let total = input_count(t.q(), lhs.inputs)?;
    let first = (0..total)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(a, b), i| {
                let input = tuple::decode(i as usize, t.q(), lhs.inputs);
                lhs.run(t, &input, a);
                rhs.run(t, &input, b);
                (a != b).then_some(i)
            },
        )
        .find_first(Option::is_some)
        .flatten();
    Ok(match first {
        None => Verdict::pass(total),
        Some(i) => {
            let input = tuple::decode(i as usize, t.q(), lhs.inputs);
            let (mut a, mut b) = (Vec::new(), Vec::new());
            lhs.run(t, &input, &mut a);
            rhs.run(t, &input, &mut b);
            Verdict::fail(i + 1, input, a, b)
        }
    })
}

/// Checks both sides of a pair of single-map programs on all inputs.
pub fn check_programs(lhs: &Program, rhs: &Program, t: &FiniteMap) -> Result<Verdict> {
    if lhs.inputs.len() != rhs.inputs.len() {
        return Err(Error::MalformedProgram("sides have different input counts".into()));
    }
    input_count(t.q(), lhs.inputs.len())?;
    Ok(check_lowered(&Lowered::new(lhs, t)?, &Lowered::new(rhs, t)?, t))
}

/// Exhaustive check of the (dual) N-gon equation for one map, inputs in
/// lexicographic order.
pub fn check_single(n: usize, dual: bool, t: &FiniteMap) -> Result<Verdict> {
    check_arity(n, dual, t)?;
    let sides = compiled(n, dual)?;
    check_programs(&sides.0, &sides.1, t)
}

/// [`check_single`] spread over threads; reports the same (least) counterexample.
pub fn check_single_par(n: usize, dual: bool, t: &FiniteMap) -> Result<Verdict> {
    check_arity(n, dual, t)?;
    let sides = compiled(n, dual)?;
    check_lowered_par(&Lowered::new(&sides.0, t)?, &Lowered::new(&sides.1, t)?, t)
}

/// Checks only the supplied inputs.
pub fn check_sampled(n: usize, dual: bool, t: &FiniteMap, samples: &[Vec<u32>]) -> Result<Verdict> {
    check_arity(n, dual, t)?;
    let sides = compiled(n, dual)?;
    let mut checked = 0;
    for input in samples {
        checked += 1;
        let a = engine::eval_single(&sides.0, t, input)?;
        let b = engine::eval_single(&sides.1, t, input)?;
        if a != b {
            return Ok(Verdict::fail(checked, input.clone(), a, b));
        }
    }
    Ok(Verdict::pass(checked))
}

/// Exhaustive check of a multi-sorted system over the product of its input carriers.
pub fn check_labeled(n: usize, dual: bool, sys: &LabeledSystem) -> Result<Verdict> {
    if (sys.ambient(), sys.dual()) != (n, dual) {
        return Err(Error::Arity {
            expected: format!("N={n}, dual={dual}"),
            got: format!("N={}, dual={}", sys.ambient(), sys.dual()),
        });
    }
    let sides = compiled(n, dual)?;
    let radices: Vec<u32> = sides.0.inputs.iter().map(|j| sys.carrier(j)).collect();
    let mut checked = 0;
    for input in tuple::Odometer::new(radices) {
        checked += 1;
        let a = engine::eval_labeled(&sides.0, sys, &input)?;
        let b = engine::eval_labeled(&sides.1, sys, &input)?;
        if a != b {
            return Ok(Verdict::fail(checked, input, a, b));
        }
    }
    Ok(Verdict::pass(checked))
}

/// Exact comparison of both sides on the given rational samples.
pub fn check_point(n: usize, dual: bool, t: &PointMap, samples: &[Vec<Rational>]) -> Result<Verdict<Rational>> {
    let sides = compiled(n, dual)?;
    let mut checked = 0;
    for input in samples {
        checked += 1;
        let a = engine::eval_point(&sides.0, t, input)?;
        let b = engine::eval_point(&sides.1, t, input)?;
        if a != b {
            return Ok(Verdict::fail(checked, input.clone(), a, b));
        }
    }
    Ok(Verdict::pass(checked))
}

/// Kashaev's form of the dual hexagon equation for `Q(a, b) := T(b, a)`:
/// `(QP)_1 Q_2 P_1 Q_2 = P_3 (QP)_4 Q_2 P_3 Q_1`.
pub fn check_kashaev_form(t: &FiniteMap) -> Result<bool> {
    if t.arity() != (2, 3) {
        return Err(Error::Arity { expected: "(2, 3)".into(), got: format!("{:?}", t.arity()) });
    }
    let q = FiniteMap::from_fn(t.q(), 2, 3, |x| t.image(&[x[1], x[0]]).to_vec())?;
    let apply = |pos| Step::Apply { k: None, pos };
    let sides = compiled(6, true)?;
    let mut lhs = specialize(&sides.0);
    let mut rhs = specialize(&sides.1);
    lhs.steps = vec![apply(2), Step::Swap(1), apply(2), Step::Swap(1), apply(1)];
    rhs.steps = vec![apply(1), Step::Swap(3), apply(2), Step::Swap(4), apply(4), Step::Swap(3)];
    Ok(check_programs(&lhs, &rhs, &q)?.holds)
}

fn specialize(p: &Program) -> Program {
    crate::eqcompiler::specialize_single(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::random_map;

    fn transposition(q: u32) -> FiniteMap {
        FiniteMap::from_fn(q, 2, 2, |t| vec![t[1], t[0]]).unwrap()
    }

    #[test]
    fn transposition_solves_pentagon_and_dual() {
        for q in 1..=3 {
            assert!(check_single(5, false, &transposition(q)).unwrap().holds);
            assert!(check_single(5, true, &transposition(q)).unwrap().holds);
        }
        assert_eq!(check_single(5, false, &transposition(2)).unwrap().inputs_checked, 8);
    }

    #[test]
    fn and_versus_nand() {
        let and = FiniteMap::from_fn(2, 2, 1, |t| vec![t[0] & t[1]]).unwrap();
        let nand = FiniteMap::from_fn(2, 2, 1, |t| vec![1 - (t[0] & t[1])]).unwrap();
        assert!(check_single(4, false, &and).unwrap().holds);
        let v = check_single(4, false, &nand).unwrap();
        assert!(!v.holds);
        let cx = v.counterexample.unwrap();
        // (0 nand 0) nand 1 = 0 but 0 nand (0 nand 1) = 1.
        assert_eq!(cx.input, vec![0, 0, 1]);
        assert_ne!(cx.lhs, cx.rhs);
        assert_eq!(v.inputs_checked, 2);
    }

    #[test]
    fn counterexamples_replay_and_parallel_agrees() {
        for seed in 0..40 {
            let t = random_map(2, 2, 2, seed).unwrap();
            let v = check_single(5, false, &t).unwrap();
            assert_eq!(v, check_single_par(5, false, &t).unwrap());
            if let Some(cx) = &v.counterexample {
                let sides = compiled(5, false).unwrap();
                assert_eq!(engine::eval_single(&sides.0, &t, &cx.input).unwrap(), cx.lhs);
                assert_eq!(engine::eval_single(&sides.1, &t, &cx.input).unwrap(), cx.rhs);
                assert_ne!(cx.lhs, cx.rhs);
            }
        }
    }

    #[test]
    fn verdict_json() {
        let v = Verdict::fail(6, vec![0u32, 1, 1], vec![1], vec![0]);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"holds":false,"counterexample":{"input":[0,1,1],"lhs":[1],"rhs":[0]},"inputs_checked":6}"#
        );
        let back: Verdict = serde_json::from_str(r#"{"holds":true,"inputs_checked":8}"#).unwrap();
        assert_eq!(back, Verdict::pass(8));
    }

    #[test]
    fn labeled_trivial_cases() {
        let id = FiniteMap::from_fn(3, 1, 1, |t| t.to_vec()).unwrap();
        let sys = LabeledSystem::uniform(3, false, &id).unwrap();
        assert!(check_labeled(3, false, &sys).unwrap().holds);
        let unit = FiniteMap::from_fn(1, 2, 1, |_| vec![0]).unwrap();
        let sys = LabeledSystem::uniform(4, false, &unit).unwrap();
        assert!(check_labeled(4, false, &sys).unwrap().holds);
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(check_single(5, false, &random_map(2, 2, 1, 0).unwrap()), Err(Error::Arity { .. })));
        assert!(check_kashaev_form(&random_map(2, 2, 2, 0).unwrap()).is_err());
        assert!(check_kashaev_form(&random_map(1, 2, 3, 0).unwrap()).unwrap());
    }
}
