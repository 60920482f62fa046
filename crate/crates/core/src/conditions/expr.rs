//! Terms in the component operations of a single map, written the way the
//! condition systems are usually displayed: bracket operations such as
//! `<a,b,c>` or `|a,b,c|`, fully parenthesised infix binary operations
//! such as `(a*b).c`, and named unary operations such as `T1(a)`.

use crate::error::{Error, Result};

/// Postfix token. `Op` pops `arity` values and pushes component `comp` of
/// the map applied to them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tok {
    Var(u8),
    Op { comp: u8, arity: u8 },
}

/// How the symbols of one condition system map to output components.
#[derive(Clone, Debug, Default)]
pub struct Notation {
    pub vars: &'static str,
    /// `(opening bracket, component)`; `|` closes itself.
    pub brackets: &'static [(char, u8)],
    pub infix: &'static [(char, u8)],
    pub named: &'static [(&'static str, u8)],
}

fn closing(open: char) -> char {
    match open {
        '{' => '}',
        '<' => '>',
        '[' => ']',
        other => other,
    }
}

struct Parser<'a> {
    src: Vec<char>,
    at: usize,
    notation: &'a Notation,
    out: Vec<Tok>,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        let s: String = self.src.iter().collect();
        Error::Parse(format!("{what} at column {} of `{s}`", self.at))
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.at).copied()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<()> {
        self.primary()?;
        if let Some(c) = self.peek() {
            if let Some(&(_, comp)) = self.notation.infix.iter().find(|(op, _)| *op == c) {
                self.at += 1;
                self.primary()?;
                self.out.push(Tok::Op { comp, arity: 2 });
            }
        }
        Ok(())
    }

    fn primary(&mut self) -> Result<()> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        if c == '(' {
            self.at += 1;
            self.expr()?;
            return self.eat(')');
        }
        if let Some(&(open, comp)) = self.notation.brackets.iter().find(|(b, _)| *b == c) {
            self.at += 1;
            let mut arity = 1;
            self.expr()?;
            while self.peek() == Some(',') {
                self.at += 1;
                self.expr()?;
                arity += 1;
            }
            self.eat(closing(open))?;
            self.out.push(Tok::Op { comp, arity });
            return Ok(());
        }
        let rest: String = self.src[self.at..].iter().collect();
        if let Some(&(name, comp)) = self.notation.named.iter().find(|(n, _)| rest.starts_with(&format!("{n}("))) {
            self.at += name.chars().count() + 1;
            self.expr()?;
            self.eat(')')?;
            self.out.push(Tok::Op { comp, arity: 1 });
            return Ok(());
        }
        if let Some(i) = self.notation.vars.find(c) {
            self.at += 1;
            self.out.push(Tok::Var(i as u8));
            return Ok(());
        }
        Err(self.err(&format!("unexpected `{c}`")))
    }
}

/// Parses one term into postfix form.
pub fn parse_term(text: &str, notation: &Notation) -> Result<Vec<Tok>> {
    let mut p = Parser { src: text.chars().filter(|c| !c.is_whitespace()).collect(), at: 0, notation, out: Vec::new() };
    p.expr()?;
    if p.at != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(p.out)
}

/// Parses `lhs = rhs`.
pub fn parse_equation(text: &str, notation: &Notation) -> Result<(Vec<Tok>, Vec<Tok>)> {
    let (l, r) = text.split_once('=').ok_or_else(|| Error::Parse(format!("no `=` in `{text}`")))?;
    Ok((parse_term(l, notation)?, parse_term(r, notation)?))
}

/// Evaluates a postfix term. `op(args, comp)` yields one component of the
/// map, or `None` when the value is not available yet; evaluation then
/// stops with `None`.
pub fn eval(
    term: &[Tok],
    vars: &[u32],
    stack: &mut Vec<u32>,
    mut op: impl FnMut(&[u32], usize) -> Option<u32>,
) -> Option<u32> {
    stack.clear();
    for tok in term {
        match *tok {
            Tok::Var(i) => stack.push(vars[i as usize]),
            Tok::Op { comp, arity } => {
                let base = stack.len() - arity as usize;
                let v = op(&stack[base..], comp as usize)?;
                stack.truncate(base);
                stack.push(v);
            }
        }
    }
    debug_assert_eq!(stack.len(), 1);
    stack.pop()
}
