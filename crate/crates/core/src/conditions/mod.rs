//! The single-map (dual) N-gon equations for 4 <= N <= 8 unpacked into
//! identities between the component operations of the map.
//!
//! These serve as an oracle independent of the compiled pipelines and as
//! pruning constraints for the search.

pub mod expr;

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinat::Label;
use crate::engine::{execute, tuple, FiniteMap, MapFamily};
use crate::eqcompiler::{compiled, map_arity};
use crate::error::{Error, Result};
use expr::{Notation, Tok};

/// One identity `lhs = rhs`, to hold for all values of the variables.
#[derive(Clone, Debug)]
pub struct Condition {
    pub text: String,
    pub lhs: Vec<Tok>,
    pub rhs: Vec<Tok>,
}

/// The identities equivalent to one (dual) N-gon equation.
#[derive(Clone, Debug)]
pub struct System {
    pub n: usize,
    pub dual: bool,
    pub vars: usize,
    pub conditions: Vec<Condition>,
}

const BIN: &[(char, u8)] = &[('*', 0), ('.', 1)];
const BIN_DUAL: &[(char, u8)] = &[('.', 0), ('*', 1)];
const BIN3: &[(char, u8)] = &[('*', 0), ('.', 1), ('%', 2)];
const TERN2: &[(char, u8)] = &[('<', 0), ('[', 1)];
const TERN3: &[(char, u8)] = &[('{', 0), ('<', 1), ('[', 2)];
const TERN4: &[(char, u8)] = &[('{', 0), ('<', 1), ('[', 2), ('|', 3)];

// T(a,b) = (a*b, a.b)
const PENTAGON: [&str; 3] = ["(a*b)*((a.b)*c) = b*c", "(a*b).((a.b)*c) = a*(b.c)", "(a.b).c = a.(b.c)"];

// T(a,b,c) = (<a,b,c>, [a,b,c]), also the last two components of the
// heptagon and dual octagon maps.
const HEXAGON: [&str; 3] = [
    "<<a,b,d>,<[a,b,d],c,e>,f> = <b,c,<d,e,f>>",
    "[<a,b,d>,<[a,b,d],c,e>,f] = <a,[b,c,<d,e,f>],[d,e,f]>",
    "[[a,b,d],c,e] = [a,[b,c,<d,e,f>],[d,e,f]]",
];

const HEPTAGON_EXTRA: [&str; 3] = [
    "{{a,b,d},{[a,b,d],c,e},{<a,b,d>,<[a,b,d],c,e>,f}} = {d,e,f}",
    "<{a,b,d},{[a,b,d],c,e},{<a,b,d>,<[a,b,d],c,e>,f}> = {b,c,<d,e,f>}",
    "[{a,b,d},{[a,b,d],c,e},{<a,b,d>,<[a,b,d],c,e>,f}] = {a,[b,c,<d,e,f>],[d,e,f]}",
];

const OCTAGON: [&str; 6] = [
    "{{a,b,d,g},{[a,b,d,g],c,e,h},{<a,b,d,g>,<[a,b,d,g],c,e,h>,f,k},l} = {d,e,f,{g,h,k,l}}",
    "<{a,b,d,g},{[a,b,d,g],c,e,h},{<a,b,d,g>,<[a,b,d,g],c,e,h>,f,k},l> \
     = {b,c,<d,e,f,{g,h,k,l}>,<g,h,k,l>}",
    "[{a,b,d,g},{[a,b,d,g],c,e,h},{<a,b,d,g>,<[a,b,d,g],c,e,h>,f,k},l] \
     = {a,[b,c,<d,e,f,{g,h,k,l}>,<g,h,k,l>],[d,e,f,{g,h,k,l}],[g,h,k,l]}",
    // Printed with `[g,h,k,l]` as the last argument; the equation gives `<g,h,k,l>`.
    "<<a,b,d,g>,<[a,b,d,g],c,e,h>,f,k> = <b,c,<d,e,f,{g,h,k,l}>,<g,h,k,l>>",
    "[<a,b,d,g>,<[a,b,d,g],c,e,h>,f,k] \
     = <a,[b,c,<d,e,f,{g,h,k,l}>,<g,h,k,l>],[d,e,f,{g,h,k,l}],[g,h,k,l]>",
    "[a,[b,c,<d,e,f,{g,h,k,l}>,<g,h,k,l>],[d,e,f,{g,h,k,l}],[g,h,k,l]] = [[a,b,d,g],c,e,h]",
];

// T~(a) = (T1(a), T2(a)): both idempotent, and they commute.
const DUAL_TETRAGON: [&str; 3] = ["T1(T1(a)) = T1(a)", "T1(T2(a)) = T2(T1(a))", "T2(T2(a)) = T2(a)"];

// T~(a,b) = (a.b, a*b)
const DUAL_PENTAGON: [&str; 3] = ["a.(b.c) = (a.b).c", "(a*(b.c)).(b*c) = (a.b)*c", "(a*(b.c))*(b*c) = a*b"];

// T~(a,b) = (a*b, a.b, a%b)
const DUAL_HEXAGON_EXTRA: [&str; 3] = [
    "(a%(b.c))*(b%c) = (a*b)%((a.b)*c)",
    "(a%(b.c)).(b%c) = (a.b)%c",
    "(a%(b.c))%(b%c) = a%b",
];

const DUAL_HEPTAGON: [&str; 6] = [
    "{b,c,{d,e,f}} = {{a,b,d},{<a,b,d>,c,e},f}",
    "{a,<b,c,{d,e,f}>,<d,e,f>} = <{a,b,d},{<a,b,d>,c,e},f>",
    "<a,<b,c,{d,e,f}>,<d,e,f>> = <<a,b,d>,c,e>",
    "{[a,<b,c,{d,e,f}>,<d,e,f>],[b,c,{d,e,f}],[d,e,f]} = [{a,b,d},{<a,b,d>,c,e},f]",
    "<[a,<b,c,{d,e,f}>,<d,e,f>],[b,c,{d,e,f}],[d,e,f]> = [<a,b,d>,c,e]",
    "[[a,<b,c,{d,e,f}>,<d,e,f>],[b,c,{d,e,f}],[d,e,f]] = [a,b,d]",
];

// The first right-hand side is printed with a misplaced bracket; the
// ternary reading below is the one equivalent to the equation.
const DUAL_OCTAGON_EXTRA: [&str; 4] = [
    "{|a,[b,c,<d,e,f>],[d,e,f]|,|b,c,<d,e,f>|,|d,e,f|} = |{a,b,d},{[a,b,d],c,e},{<a,b,d>,<[a,b,d],c,e>,f}|",
    "<|a,[b,c,<d,e,f>],[d,e,f]|,|b,c,<d,e,f>|,|d,e,f|> = |<a,b,d>,<[a,b,d],c,e>,f|",
    "[|a,[b,c,<d,e,f>],[d,e,f]|,|b,c,<d,e,f>|,|d,e,f|] = |[a,b,d],c,e|",
    "||a,[b,c,<d,e,f>],[d,e,f]|,|b,c,<d,e,f>|,|d,e,f|| = |a,b,d|",
];

fn sources(n: usize, dual: bool) -> Result<(Notation, Vec<&'static str>)> {
    let note = |vars, brackets, infix| Notation { vars, brackets, infix, named: &[] };
    let cat = |parts: &[&[&'static str]]| parts.concat();
    Ok(match (n, dual) {
        (4, false) => (note("abc", &[], &[('.', 0)]), vec!["(a.b).c = a.(b.c)"]),
        (5, false) => (note("abc", &[], BIN), PENTAGON.to_vec()),
        (6, false) => (note("abcdef", TERN2, &[]), HEXAGON.to_vec()),
        (7, false) => (note("abcdef", TERN3, &[]), cat(&[&HEXAGON, &HEPTAGON_EXTRA])),
        (8, false) => (note("abcdefghkl", TERN3, &[]), OCTAGON.to_vec()),
        (4, true) => (
            Notation { vars: "a", brackets: &[], infix: &[], named: &[("T1", 0), ("T2", 1)] },
            DUAL_TETRAGON.to_vec(),
        ),
        (5, true) => (note("abc", &[], BIN_DUAL), DUAL_PENTAGON.to_vec()),
        (6, true) => (
            note("abc", &[], BIN3),
            cat(&[&PENTAGON, &DUAL_HEXAGON_EXTRA]),
        ),
        (7, true) => (note("abcdef", TERN3, &[]), DUAL_HEPTAGON.to_vec()),
        (8, true) => (note("abcdef", TERN4, &[]), cat(&[&HEXAGON, &HEPTAGON_EXTRA, &DUAL_OCTAGON_EXTRA])),
        _ => return Err(Error::NoReference(n)),
    })
}

fn build(n: usize, dual: bool) -> Result<System> {
    let (notation, texts) = sources(n, dual)?;
    let (k_in, k_out) = map_arity(n, dual);
    let mut conditions = Vec::new();
    for text in texts {
        let (lhs, rhs) = expr::parse_equation(text, &notation)?;
        for t in lhs.iter().chain(&rhs) {
            if let Tok::Op { arity, comp } = t {
                if *arity as usize != k_in || *comp as usize >= k_out {
                    return Err(Error::Parse(format!("operation {comp} of arity {arity} in `{text}`")));
                }
            }
        }
        conditions.push(Condition { text: text.to_string(), lhs, rhs });
    }
    Ok(System { n, dual, vars: notation.vars.len(), conditions })
}

/// The condition system for the (dual) N-gon equation, 4 <= N <= 8.
pub fn system(n: usize, dual: bool) -> Result<&'static System> {
    static CACHE: OnceLock<HashMap<(usize, bool), System>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut m = HashMap::new();
        for n in 4..=8 {
            for dual in [false, true] {
                m.insert((n, dual), build(n, dual).expect("condition tables parse"));
            }
        }
        m
    });
    cache.get(&(n, dual)).ok_or(Error::NoReference(n))
}

/// Symbolic evaluation: every slot holds a postfix term over the inputs.
struct Symbolic {
    k_out: usize,
}

impl MapFamily for Symbolic {
    type Value = Vec<Tok>;

    fn apply(&self, _k: Option<&Label>, args: &[Vec<Tok>]) -> Result<Vec<Vec<Tok>>> {
        let base = args.concat();
        let arity = args.len() as u8;
        Ok((0..self.k_out as u8)
            .map(|comp| {
                let mut t = base.clone();
                t.push(Tok::Op { comp, arity });
                t
            })
            .collect())
    }
}

fn render(term: &[Tok]) -> String {
    let mut stack: Vec<String> = Vec::new();
    for tok in term {
        match *tok {
            Tok::Var(i) => stack.push(format!("x{}", i + 1)),
            Tok::Op { comp, arity } => {
                let args = stack.split_off(stack.len() - arity as usize);
                stack.push(format!("T{}({})", comp + 1, args.join(",")));
            }
        }
    }
    stack.pop().unwrap_or_default()
}

/// Conditions read off the compiled pipelines by symbolic execution: one
/// identity per output slot, with the input slots as variables. Available
/// for every order, including those without a printed system.
pub fn derived_system(n: usize, dual: bool) -> Result<System> {
    let sides = compiled(n, dual)?;
    let (_, k_out) = map_arity(n, dual);
    let sym = Symbolic { k_out };
    let vars = sides.0.inputs.len();
    let inputs: Vec<Vec<Tok>> = (0..vars as u8).map(|i| vec![Tok::Var(i)]).collect();
    let lhs = execute(&sides.0, &sym, &inputs)?;
    let rhs = execute(&sides.1, &sym, &inputs)?;
    let conditions = lhs
        .into_iter()
        .zip(rhs)
        .map(|(l, r)| Condition { text: format!("{} = {}", render(&l), render(&r)), lhs: l, rhs: r })
        .collect();
    Ok(System { n, dual, vars, conditions })
}

impl Condition {
    /// Whether the identity holds at one assignment of the variables.
    pub fn holds_at(&self, t: &FiniteMap, vars: &[u32], stack: &mut Vec<u32>) -> bool {
        let op = |args: &[u32], comp: usize| Some(t.image(args)[comp]);
        expr::eval(&self.lhs, vars, stack, op) == expr::eval(&self.rhs, vars, stack, op)
    }
}

fn check_arity(sys: &System, t: &FiniteMap) -> Result<()> {
    let expected = map_arity(sys.n, sys.dual);
    if t.arity() != expected {
        return Err(Error::Arity { expected: format!("{expected:?}"), got: format!("{:?}", t.arity()) });
    }
    Ok(())
}

/// The first `(condition index, assignment)` at which the system fails,
/// assignments in lexicographic order.
pub fn first_violation(n: usize, dual: bool, t: &FiniteMap) -> Result<Option<(usize, Vec<u32>)>> {
    let sys = system(n, dual)?;
    check_arity(sys, t)?;
    let mut stack = Vec::new();
    for vars in tuple::Odometer::uniform(t.q(), sys.vars) {
        if let Some(i) = sys.conditions.iter().position(|c| !c.holds_at(t, &vars, &mut stack)) {
            return Ok(Some((i, vars)));
        }
    }
    Ok(None)
}

/// Whether every condition holds at every assignment.
pub fn check(n: usize, dual: bool, t: &FiniteMap) -> Result<bool> {
    Ok(first_violation(n, dual, t)?.is_none())
}

/// Whether the conditions selected by `which` hold everywhere.
pub fn check_subset(n: usize, dual: bool, t: &FiniteMap, which: &[usize]) -> Result<bool> {
    let sys = system(n, dual)?;
    check_arity(sys, t)?;
    let mut stack = Vec::new();
    Ok(tuple::Odometer::uniform(t.q(), sys.vars)
        .all(|vars| which.iter().all(|&i| sys.conditions[i].holds_at(t, &vars, &mut stack))))
}

/// Checks `samples` seeded random assignments instead of all of them.
pub fn check_sampled(n: usize, dual: bool, t: &FiniteMap, samples: usize, seed: u64) -> Result<bool> {
    let sys = system(n, dual)?;
    check_arity(sys, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stack = Vec::new();
    let mut vars = vec![0; sys.vars];
    for _ in 0..samples {
        vars.iter_mut().for_each(|v| *v = rng.gen_range(0..t.q()));
        if !sys.conditions.iter().all(|c| c.holds_at(t, &vars, &mut stack)) {
            return Ok(false);
        }
    }
    Ok(true)
}
