//! Exhaustive enumeration of single-map solutions over a small carrier.
//!
//! Table rows are assigned in row-index order. Every condition instance
//! (an identity together with values for its variables) is evaluated as far
//! as the partial table allows and parked on the first unassigned row it
//! needs; assigning that row wakes it up again. Parking is undone on
//! backtrack through a trail.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{self, expr, System};
use crate::engine::{tuple, FiniteMap};
use crate::eqcompiler::map_arity;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

const UNASSIGNED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Count,
    Collect,
}

/// Restrictions on the enumerated maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Filter {
    /// Ignores the given argument (0-based; written 1-based as `degenerate:i`).
    Degenerate(usize),
    Surjective,
    /// `x ↦ reverse(T(x))` is an involution.
    InvolutiveAfterP,
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filter::Degenerate(i) => write!(f, "degenerate:{}", i + 1),
            Filter::Surjective => f.write_str("surjective"),
            Filter::InvolutiveAfterP => f.write_str("involutive-after-p"),
        }
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "surjective" => Ok(Filter::Surjective),
            "involutive-after-p" => Ok(Filter::InvolutiveAfterP),
            _ => {
                let i = s
                    .strip_prefix("degenerate:")
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown filter `{s}`")))?;
                Ok(Filter::Degenerate(i - 1))
            }
        }
    }
}

impl TryFrom<String> for Filter {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Filter> for String {
    fn from(f: Filter) -> String {
        f.to_string()
    }
}

impl Filter {
    fn accepts(&self, t: &FiniteMap) -> bool {
        match *self {
            Filter::Degenerate(i) => t.is_degenerate_in(i),
            Filter::Surjective => t.is_surjective(),
            Filter::InvolutiveAfterP => {
                t.k_in() == t.k_out()
                    && t.rows().enumerate().all(|(i, r)| {
                        let once: Vec<u32> = r.iter().rev().copied().collect();
                        let twice: Vec<u32> = t.image(&once).iter().rev().copied().collect();
                        tuple::encode(&twice, t.q()) == i
                    })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    pub dual: bool,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<u64>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub filters: Vec<Filter>,
    pub budget: u64,
}

impl SearchSpec {
    pub fn new(n: usize, dual: bool, q: u32) -> Self {
        SearchSpec { n, dual, q, limit: None, mode: Mode::Collect, filters: Vec::new(), budget: DEFAULT_BUDGET }
    }

    pub fn counting(mut self) -> Self {
        self.mode = Mode::Count;
        self
    }

    pub fn with_filter(mut self, f: Filter) -> Self {
        self.filters.push(f);
        self
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = Some(limit);
        self
    }
}

/// Solutions in table order. `elapsed` is informational and not serialized.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionSet {
    pub spec: SearchSpec,
    pub count: u64,
    pub nodes_visited: u64,
    pub solutions: Vec<FiniteMap>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone)]
struct Instance {
    cond: u32,
    vars: Vec<u32>,
}

enum Outcome {
    Pass,
    Fail,
    Blocked(usize),
}

struct Problem<'a> {
    sys: &'a System,
    spec: &'a SearchSpec,
    k_in: usize,
    k_out: usize,
    rows: usize,
    values: u32,
    /// Row whose value a degenerate row must copy.
    forced: Vec<Option<usize>>,
    instances: Vec<Instance>,
}

struct Worker<'a> {
    p: &'a Problem<'a>,
    table: Vec<u32>,
    pending: Vec<Vec<u32>>,
    trail: Vec<usize>,
    stack: Vec<u32>,
    nodes: u64,
    found: u64,
    solutions: Vec<FiniteMap>,
}

impl Problem<'_> {
    fn digit(&self, value: u32, comp: usize) -> u32 {
        value / self.spec.q.pow((self.k_out - 1 - comp) as u32) % self.spec.q
    }
}

impl<'a> Worker<'a> {
    fn new(p: &'a Problem<'a>) -> Self {
        Worker {
            p,
            table: vec![UNASSIGNED; p.rows],
            pending: vec![Vec::new(); p.rows],
            trail: Vec::new(),
            stack: Vec::new(),
            nodes: 0,
            found: 0,
            solutions: Vec::new(),
        }
    }

    fn eval(&mut self, inst: usize) -> Outcome {
        let p = self.p;
        let Instance { cond, vars } = &p.instances[inst];
        let c = &p.sys.conditions[*cond as usize];
        let table = &self.table;
        let mut blocked = None;
        let mut op = |args: &[u32], comp: usize| {
            let row = tuple::encode(args, p.spec.q);
            match table[row] {
                UNASSIGNED => {
                    blocked = Some(row);
                    None
                }
                v => Some(p.digit(v, comp)),
            }
        };
        let Some(l) = expr::eval(&c.lhs, vars, &mut self.stack, &mut op) else {
            return Outcome::Blocked(blocked.expect("blocked row"));
        };
        let Some(r) = expr::eval(&c.rhs, vars, &mut self.stack, &mut op) else {
            return Outcome::Blocked(blocked.expect("blocked row"));
        };
        if l == r {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    /// Parks every instance; false if one already fails.
    fn seed(&mut self) -> bool {
        for i in 0..self.p.instances.len() {
            match self.eval(i) {
                Outcome::Pass => {}
                Outcome::Fail => return false,
                Outcome::Blocked(r) => self.pending[r].push(i as u32),
            }
        }
        true
    }

    fn wake(&mut self, row: usize) -> bool {
        for i in 0..self.pending[row].len() {
            let inst = self.pending[row][i] as usize;
            match self.eval(inst) {
                Outcome::Pass => {}
                Outcome::Fail => return false,
                Outcome::Blocked(r) => {
                    debug_assert!(r > row);
                    self.pending[r].push(inst as u32);
                    self.trail.push(r);
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let r = self.trail.pop().expect("trail entry");
            self.pending[r].pop();
        }
    }

    fn limit_reached(&self) -> bool {
        self.p.spec.limit.is_some_and(|l| self.found >= l)
    }

    fn leaf(&mut self) {
        let p = self.p;
        let mut flat = Vec::with_capacity(p.rows * p.k_out);
        for &v in &self.table {
            flat.extend((0..p.k_out).map(|c| p.digit(v, c)));
        }
        let t = FiniteMap::from_flat(p.spec.q, p.k_in, p.k_out, flat).expect("well-formed table");
        if p.spec.filters.iter().all(|f| f.accepts(&t)) {
            self.found += 1;
            if p.spec.mode == Mode::Collect {
                self.solutions.push(t);
            }
        }
    }

    fn assign(&mut self, row: usize, v: u32) {
        self.nodes += 1;
        self.table[row] = v;
        let mark = self.trail.len();
        if self.wake(row) {
            self.descend(row + 1);
        }
        self.undo(mark);
        self.table[row] = UNASSIGNED;
    }

    fn descend(&mut self, row: usize) {
        if self.limit_reached() {
            return;
        }
        if row == self.p.rows {
            self.leaf();
            return;
        }
        match self.p.forced[row] {
            Some(base) => self.assign(row, self.table[base]),
            None => {
                for v in 0..self.p.values {
                    if self.limit_reached() {
                        return;
                    }
                    self.assign(row, v);
                }
            }
        }
    }
}

/// The identities the search enforces: the printed systems where they
/// exist, systems derived from the pipelines otherwise.
fn constraint_system(n: usize, dual: bool) -> Result<std::borrow::Cow<'static, System>> {
    Ok(match conditions::system(n, dual) {
        Ok(s) => std::borrow::Cow::Borrowed(s),
        Err(_) => std::borrow::Cow::Owned(conditions::derived_system(n, dual)?),
    })
}

/// Estimated number of leaves without pruning.
pub fn estimate(spec: &SearchSpec) -> f64 {
    let (k_in, k_out) = map_arity(spec.n, spec.dual);
    let rows = (spec.q as f64).powi(k_in as i32);
    let degenerate: Vec<usize> = spec
        .filters
        .iter()
        .filter_map(|f| match f {
            Filter::Degenerate(i) if *i < k_in => Some(*i),
            _ => None,
        })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let free = rows / (spec.q as f64).powi(degenerate.len() as i32);
    (spec.q as f64).powf(k_out as f64 * free)
}

/// Enumerates all solutions of the spec's equation, in table order.
pub fn enumerate(spec: &SearchSpec) -> Result<SolutionSet> {
    let start = Instant::now();
    if spec.q == 0 || spec.n < 3 {
        return Err(Error::InvalidMap(format!("invalid search N={}, q={}", spec.n, spec.q)));
    }
    let est = estimate(spec);
    if est > spec.budget as f64 {
        return Err(Error::Budget { estimate: est, budget: spec.budget });
    }
    let (k_in, k_out) = map_arity(spec.n, spec.dual);
    if let Some(Filter::Degenerate(i)) = spec.filters.iter().find(|f| matches!(f, Filter::Degenerate(i) if *i >= k_in)) {
        return Err(Error::Arity { expected: format!("argument below {k_in}"), got: (i + 1).to_string() });
    }
    let sys = constraint_system(spec.n, spec.dual)?;
    let q = spec.q;
    let rows = tuple::count(q, k_in).ok_or_else(|| Error::InvalidMap("table too large".into()))?;
    let values = q.pow(k_out as u32);
    let degenerate: Vec<usize> = spec
        .filters
        .iter()
        .filter_map(|f| if let Filter::Degenerate(i) = f { Some(*i) } else { None })
        .collect();
    let forced = (0..rows)
        .map(|r| {
            let mut t = tuple::decode(r, q, k_in);
            degenerate.iter().for_each(|&i| t[i] = 0);
            let base = tuple::encode(&t, q);
            (base != r).then_some(base)
        })
        .collect();
    let mut instances = Vec::new();
    for (ci, _) in sys.conditions.iter().enumerate() {
        for vars in tuple::Odometer::uniform(q, sys.vars) {
            instances.push(Instance { cond: ci as u32, vars });
        }
    }
    let problem = Problem { sys: &sys, spec, k_in, k_out, rows, values, forced, instances };

    let mut root = Worker::new(&problem);
    if !root.seed() {
        return Ok(SolutionSet { spec: spec.clone(), count: 0, nodes_visited: 0, solutions: vec![], elapsed: start.elapsed() });
    }
    let seeded = root.pending;
    let branches: Vec<(u64, u64, Vec<FiniteMap>)> = (0..values)
        .into_par_iter()
        .map(|v| {
            let mut w = Worker::new(&problem);
            w.pending = seeded.clone();
            w.assign(0, v);
            (w.found, w.nodes, w.solutions)
        })
        .collect();
    let mut count = 0;
    let mut nodes = 0;
    let mut solutions = Vec::new();
    for (found, n, sols) in branches {
        count += found;
        nodes += n;
        solutions.extend(sols);
    }
    if let Some(l) = spec.limit {
        count = count.min(l);
        solutions.truncate(l as usize);
    }
    Ok(SolutionSet { spec: spec.clone(), count, nodes_visited: nodes, solutions, elapsed: start.elapsed() })
}

/// Solution counts for the pentagon, hexagon and heptagon equations and
/// their duals, as `(N, dual, count)`.
pub fn count_pentagon_like(q: u32) -> Result<Vec<(usize, bool, u64)>> {
    let mut out = Vec::new();
    for n in 5..=7 {
        for dual in [false, true] {
            out.push((n, dual, enumerate(&SearchSpec::new(n, dual, q).counting())?.count));
        }
    }
    Ok(out)
}
