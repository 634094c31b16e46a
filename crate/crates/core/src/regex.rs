//! Regular expressions over the one-letter alphabet `{a}`.
//!
//! Grammar:
//!
//! ```text
//! E      ::= term ('|' term)*
//! term   ::= factor+
//! factor ::= base '*'?
//! base   ::= 'a' ('^' uint)? | '(' E ')'
//! ```
//!
//! A unary language is ultimately periodic, so compilation determinizes the
//! Thompson automaton into a lasso (a tail of `threshold` states followed by
//! a cycle of `period` states) and membership is an index lookup.

use std::collections::HashMap;
use std::fmt;

use crate::error::RegexError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegexAst {
    /// `a^count`; a count of zero is the empty word and only occurs under a star.
    Literal(u32),
    Concat(Vec<RegexAst>),
    Union(Vec<RegexAst>),
    Star(Box<RegexAst>),
}

impl RegexAst {
    pub fn star(inner: RegexAst) -> Self {
        RegexAst::Star(Box::new(inner))
    }
}

impl fmt::Display for RegexAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexAst::Literal(1) => write!(f, "a"),
            RegexAst::Literal(k) => write!(f, "a^{k}"),
            RegexAst::Concat(parts) => {
                for p in parts {
                    match p {
                        RegexAst::Concat(_) | RegexAst::Union(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            RegexAst::Union(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    match p {
                        RegexAst::Union(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            RegexAst::Star(inner) => match inner.as_ref() {
                RegexAst::Literal(_) => write!(f, "{inner}*"),
                _ => write!(f, "({inner})*"),
            },
        }
    }
}

pub fn parse_regex(src: &str) -> Result<RegexAst, RegexError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let (ast, bare_empty) = p.union()?;
    if p.pos != p.src.len() {
        return Err(p.error("unexpected character"));
    }
    if let Some(offset) = bare_empty {
        return Err(RegexError::EmptyLiteral { offset });
    }
    Ok(ast)
}

// Flattens nested concatenations, fuses adjacent literals (`a a^2` is
// `a^3`) and drops empty literals next to other factors.
fn concat(parts: Vec<RegexAst>) -> RegexAst {
    let mut flat: Vec<RegexAst> = Vec::new();
    let mut stack: Vec<RegexAst> = parts.into_iter().rev().collect();
    while let Some(p) = stack.pop() {
        match p {
            RegexAst::Concat(inner) => stack.extend(inner.into_iter().rev()),
            RegexAst::Literal(k) => match flat.last_mut() {
                Some(RegexAst::Literal(prev)) => *prev += k,
                _ => flat.push(RegexAst::Literal(k)),
            },
            other => flat.push(other),
        }
    }
    if flat.len() > 1 {
        flat.retain(|p| *p != RegexAst::Literal(0));
    }
    match flat.len() {
        0 => RegexAst::Literal(0),
        1 => flat.pop().unwrap(),
        _ => RegexAst::Concat(flat),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

// Each production also returns the offset of the first `a^0` that is not
// under a star, if any.
type Parsed = (RegexAst, Option<usize>);

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> RegexError {
        RegexError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn union(&mut self) -> Result<Parsed, RegexError> {
        let (first, mut empty) = self.term()?;
        let mut parts = vec![first];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let (t, e) = self.term()?;
            empty = empty.or(e);
            parts.push(t);
        }
        let ast = if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            let mut flat = Vec::with_capacity(parts.len());
            for p in parts {
                match p {
                    RegexAst::Union(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            RegexAst::Union(flat)
        };
        Ok((ast, empty))
    }

    fn term(&mut self) -> Result<Parsed, RegexError> {
        let mut parts = Vec::new();
        let mut empty = None;
        while matches!(self.peek(), Some(b'a') | Some(b'(')) {
            let (f, e) = self.factor()?;
            empty = empty.or(e);
            parts.push(f);
        }
        if parts.is_empty() {
            return Err(self.error("expected `a` or `(`"));
        }
        Ok((concat(parts), empty))
    }

    fn factor(&mut self) -> Result<Parsed, RegexError> {
        let (base, empty) = self.base()?;
        if self.peek() == Some(b'*') {
            self.pos += 1;
            Ok((RegexAst::star(base), None))
        } else {
            Ok((base, empty))
        }
    }

    fn base(&mut self) -> Result<Parsed, RegexError> {
        let start = self.pos;
        match self.peek() {
            Some(b'a') => {
                self.pos += 1;
                if self.peek() != Some(b'^') {
                    return Ok((RegexAst::Literal(1), None));
                }
                self.pos += 1;
                let digits = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if digits == self.pos {
                    return Err(self.error("expected a count after `^`"));
                }
                let text = std::str::from_utf8(&self.src[digits..self.pos]).unwrap();
                let k: u32 = text.parse().map_err(|_| RegexError::Syntax {
                    offset: digits,
                    message: "count too large".into(),
                })?;
                let empty = (k == 0).then_some(start);
                Ok((RegexAst::Literal(k), empty))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected `a` or `(`")),
        }
    }
}

/// Thompson automaton over `{a}`: `step` edges consume one `a`, `eps` edges
/// consume nothing.
#[derive(Clone, Debug, Default)]
pub struct Nfa {
    step: Vec<Vec<usize>>,
    eps: Vec<Vec<usize>>,
    start: usize,
    accept: usize,
}

impl Nfa {
    pub fn from_ast(ast: &RegexAst) -> Self {
        let mut nfa = Nfa::default();
        let (s, e) = nfa.build(ast);
        nfa.start = s;
        nfa.accept = e;
        nfa
    }

    fn add_state(&mut self) -> usize {
        self.step.push(Vec::new());
        self.eps.push(Vec::new());
        self.step.len() - 1
    }

    fn build(&mut self, ast: &RegexAst) -> (usize, usize) {
        match ast {
            RegexAst::Literal(k) => {
                let s = self.add_state();
                let mut cur = s;
                for _ in 0..*k {
                    let next = self.add_state();
                    self.step[cur].push(next);
                    cur = next;
                }
                (s, cur)
            }
            RegexAst::Concat(parts) => {
                let s = self.add_state();
                let mut cur = s;
                for p in parts {
                    let (ps, pe) = self.build(p);
                    self.eps[cur].push(ps);
                    cur = pe;
                }
                (s, cur)
            }
            RegexAst::Union(parts) => {
                let s = self.add_state();
                let e = self.add_state();
                for p in parts {
                    let (ps, pe) = self.build(p);
                    self.eps[s].push(ps);
                    self.eps[pe].push(e);
                }
                (s, e)
            }
            RegexAst::Star(inner) => {
                let s = self.add_state();
                let (is, ie) = self.build(inner);
                self.eps[s].push(is);
                self.eps[ie].push(s);
                (s, s)
            }
        }
    }

    pub fn state_count(&self) -> usize {
        self.step.len()
    }

    fn closure(&self, set: &mut [bool]) {
        let mut stack: Vec<usize> = (0..set.len()).filter(|&i| set[i]).collect();
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if !set[r] {
                    set[r] = true;
                    stack.push(r);
                }
            }
        }
    }

    fn initial(&self) -> Vec<bool> {
        let mut set = vec![false; self.state_count()];
        set[self.start] = true;
        self.closure(&mut set);
        set
    }

    fn advance(&self, set: &[bool]) -> Vec<bool> {
        let mut next = vec![false; set.len()];
        for (q, _) in set.iter().enumerate().filter(|(_, on)| **on) {
            for &r in &self.step[q] {
                next[r] = true;
            }
        }
        self.closure(&mut next);
        next
    }

    /// Membership of `a^n` by stepping the state set `n` times.
    pub fn accepts_by_simulation(&self, n: u64) -> bool {
        let mut set = self.initial();
        for _ in 0..n {
            set = self.advance(&set);
        }
        set[self.accept]
    }
}

/// Compiled membership test for a unary regular language, stored in
/// ultimately periodic form: for `n >= threshold`, `a^n` is accepted iff
/// `a^(n + period)` is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMembership {
    threshold: u64,
    period: u64,
    // accepted[i] for i < threshold + period
    accepted: Vec<bool>,
}

impl SemilinearMembership {
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Lasso state count (tail plus cycle).
    pub fn state_count(&self) -> usize {
        self.accepted.len()
    }

    /// Accepted residues `r` in `0..period`, meaning `threshold + r + j·period` is accepted for all `j`.
    pub fn residues(&self) -> Vec<u64> {
        (0..self.period)
            .filter(|r| self.accepted[(self.threshold + r) as usize])
            .collect()
    }

    /// Accepted lengths below the threshold.
    pub fn tail_members(&self) -> Vec<u64> {
        (0..self.threshold)
            .filter(|&i| self.accepted[i as usize])
            .collect()
    }

    pub fn matches(&self, n: u64) -> bool {
        let idx = if n < self.threshold {
            n
        } else {
            self.threshold + (n - self.threshold) % self.period
        };
        self.accepted[idx as usize]
    }

    /// True iff the language is exactly `{a^count}`.
    pub fn is_singleton(&self, count: u64) -> bool {
        count < self.threshold
            && self
                .accepted
                .iter()
                .enumerate()
                .all(|(i, &acc)| acc == (i as u64 == count))
    }

    pub fn is_empty(&self) -> bool {
        !self.accepted.iter().any(|&a| a)
    }
}

pub fn compile(ast: &RegexAst) -> SemilinearMembership {
    let nfa = Nfa::from_ast(ast);
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut sets: Vec<Vec<bool>> = Vec::new();
    let mut cur = nfa.initial();
    loop {
        if let Some(&first) = seen.get(&cur) {
            let accepted = sets.iter().map(|s| s[nfa.accept]).collect();
            return minimize(accepted, first, sets.len() - first);
        }
        seen.insert(cur.clone(), sets.len());
        let next = nfa.advance(&cur);
        sets.push(std::mem::replace(&mut cur, next));
    }
}

// Smallest period dividing the raw cycle, then the shortest tail.
fn minimize(accepted: Vec<bool>, threshold: usize, period: usize) -> SemilinearMembership {
    let cycle = &accepted[threshold..];
    let period = (1..=period)
        .find(|&p| period.is_multiple_of(p) && (0..period).all(|i| cycle[i] == cycle[i % p]))
        .unwrap_or(period);
    let mut threshold = threshold;
    while threshold > 0 && accepted[threshold - 1] == accepted[threshold - 1 + period] {
        threshold -= 1;
    }
    SemilinearMembership {
        threshold: threshold as u64,
        period: period as u64,
        accepted: accepted[..threshold + period].to_vec(),
    }
}

pub fn matches(m: &SemilinearMembership, n: u64) -> bool {
    m.matches(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use RegexAst::*;

    fn lang(src: &str) -> SemilinearMembership {
        compile(&parse_regex(src).unwrap())
    }

    #[test]
    fn parses_literals_and_groups() {
        assert_eq!(parse_regex("a^2").unwrap(), Literal(2));
        assert_eq!(parse_regex("a").unwrap(), Literal(1));
        assert_eq!(
            parse_regex("a(aa)*").unwrap(),
            Concat(vec![Literal(1), RegexAst::star(Literal(2))])
        );
        assert_eq!(parse_regex("aa^2(a)").unwrap(), Literal(4));
        assert_eq!(
            parse_regex("a^2|a^3*").unwrap(),
            Union(vec![Literal(2), RegexAst::star(Literal(3))])
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse_regex("a^").unwrap_err(),
            RegexError::Syntax {
                offset: 2,
                message: "expected a count after `^`".into()
            }
        );
        assert!(matches!(
            parse_regex("(a").unwrap_err(),
            RegexError::Syntax { offset: 2, .. }
        ));
        assert!(matches!(
            parse_regex("a|").unwrap_err(),
            RegexError::Syntax { offset: 2, .. }
        ));
        assert!(matches!(
            parse_regex("ab").unwrap_err(),
            RegexError::Syntax { offset: 1, .. }
        ));
        assert!(parse_regex("").is_err());
    }

    #[test]
    fn empty_literal_only_under_star() {
        assert_eq!(
            parse_regex("aa^0").unwrap_err(),
            RegexError::EmptyLiteral { offset: 1 }
        );
        assert!(parse_regex("(a^0)*").is_ok());
        assert!(parse_regex("(a|a^0)*a").is_ok());
        assert!(parse_regex("(a|a^0)a").is_err());
    }

    #[test]
    fn singleton_language() {
        let m = lang("a^2");
        assert!(m.matches(2));
        assert!(!m.matches(3));
        assert!((0..40).filter(|&n| m.matches(n)).eq([2]));
        assert!(m.is_singleton(2));
        assert!(!m.is_singleton(3));
    }

    #[test]
    fn odd_lengths() {
        let m = lang("a(aa)*");
        assert!(!m.matches(4));
        assert!(m.matches(5));
        assert!((0..=20).all(|n| m.matches(n) == (n % 2 == 1)));
        // the minimal lasso for odd lengths has no tail
        assert_eq!((m.threshold(), m.period()), (0, 2));
        assert_eq!(m.residues(), vec![1]);
        assert!(!m.is_singleton(1));
    }

    #[test]
    fn a_star_is_universal() {
        let m = lang("a*");
        assert!((0..100).all(|n| m.matches(n)));
        assert_eq!(m.period(), 1);
    }

    #[test]
    fn display_is_reparsable() {
        for src in ["a^2", "a(aa)*", "(a|a^3)*a^2", "((a^2)*)*", "a(a|a^2)", "a^2*a*"] {
            let ast = parse_regex(src).unwrap();
            assert_eq!(parse_regex(&ast.to_string()).unwrap(), ast, "{src}");
        }
    }
}
