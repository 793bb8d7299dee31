//! OpenQASM 2.0 subset parser and emitter.
//!
//! Supported: the version header, `include "qelib1.inc"` (treated as
//! built-in), `qreg`/`creg`, gate definitions (inlined on use), gate
//! applications with whole-register broadcast, `barrier` (ignored) and
//! trailing `measure` statements (dropped with a warning). `reset`, `if`,
//! `opaque` and mid-circuit measurements are rejected. Parameter expressions
//! know literals, `pi`, parentheses, unary minus and `+ - * /`.

use super::{Circuit, GateKind, GateOp};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::rc::Rc;

/// Nesting limit when inlining gate definitions.
pub const MAX_EXPANSION_DEPTH: usize = 64;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

fn err<T>(pos: (u32, u32), msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line: pos.0,
        col: pos.1,
        msg: msg.into(),
    })
}

#[derive(Debug)]
pub struct ParsedProgram {
    pub circuit: Circuit,
    pub warnings: Vec<String>,
}

// ---------------------------------------------------------------- lexer --

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

impl Token {
    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);
    while let Some(&ch) = chars.peek() {
        let start = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if ch.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if ch == '/' {
            bump(&mut chars);
            if chars.peek() == Some(&'/') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            } else {
                toks.push(Token {
                    tok: Tok::Sym('/'),
                    line: start.0,
                    col: start.1,
                });
            }
            continue;
        }
        if ch == '"' {
            bump(&mut chars);
            let mut s = String::new();
            loop {
                match chars.peek() {
                    None => return err(start, "unterminated string"),
                    Some(&'"') => {
                        bump(&mut chars);
                        break;
                    }
                    Some(_) => s.push(bump(&mut chars)),
                }
            }
            toks.push(Token {
                tok: Tok::Str(s),
                line: start.0,
                col: start.1,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            toks.push(Token {
                tok: Tok::Ident(s),
                line: start.0,
                col: start.1,
            });
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let mut s = String::new();
            let mut is_real = false;
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(bump(&mut chars));
                } else if c == '.' && !is_real {
                    is_real = true;
                    s.push(bump(&mut chars));
                } else if (c == 'e' || c == 'E') && !s.is_empty() {
                    is_real = true;
                    s.push(bump(&mut chars));
                    if let Some(&sign) = chars.peek() {
                        if sign == '+' || sign == '-' {
                            s.push(bump(&mut chars));
                        }
                    }
                } else {
                    break;
                }
            }
            let tok = if is_real {
                match s.parse::<f64>() {
                    Ok(v) => Tok::Real(v),
                    Err(_) => return err(start, format!("bad number '{s}'")),
                }
            } else {
                match s.parse::<u64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => return err(start, format!("bad number '{s}'")),
                }
            };
            toks.push(Token {
                tok,
                line: start.0,
                col: start.1,
            });
            continue;
        }
        if ch == '-' {
            bump(&mut chars);
            if chars.peek() == Some(&'>') {
                bump(&mut chars);
                toks.push(Token {
                    tok: Tok::Arrow,
                    line: start.0,
                    col: start.1,
                });
            } else {
                toks.push(Token {
                    tok: Tok::Sym('-'),
                    line: start.0,
                    col: start.1,
                });
            }
            continue;
        }
        if "()[]{},;+*=<>!".contains(ch) {
            bump(&mut chars);
            toks.push(Token {
                tok: Tok::Sym(ch),
                line: start.0,
                col: start.1,
            });
            continue;
        }
        return err(start, format!("unexpected character '{ch}'"));
    }
    Ok(toks)
}

// ---------------------------------------------------- expressions --------

#[derive(Clone, Debug)]
enum Expr {
    Const(f64),
    Pi,
    Param(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, args: &[f64]) -> f64 {
        match self {
            Expr::Const(v) => *v,
            Expr::Pi => PI,
            Expr::Param(i) => args[*i],
            Expr::Neg(e) => -e.eval(args),
            Expr::Add(a, b) => a.eval(args) + b.eval(args),
            Expr::Sub(a, b) => a.eval(args) - b.eval(args),
            Expr::Mul(a, b) => a.eval(args) * b.eval(args),
            Expr::Div(a, b) => a.eval(args) / b.eval(args),
        }
    }
}

// ---------------------------------------------------------- builtins -----

/// Gate names usable without a definition, mapped to a base kind plus the
/// number of leading control arguments.
fn builtin(name: &str) -> Option<(GateKind, usize)> {
    use GateKind::*;
    Some(match name {
        "id" => (I, 0),
        "x" => (X, 0),
        "y" => (Y, 0),
        "z" => (Z, 0),
        "h" => (H, 0),
        "s" => (S, 0),
        "sdg" => (Sdg, 0),
        "t" => (T, 0),
        "tdg" => (Tdg, 0),
        "sx" => (Sx, 0),
        "sxdg" => (Sxdg, 0),
        "rx" => (Rx, 0),
        "ry" => (Ry, 0),
        "rz" => (Rz, 0),
        "p" | "u1" => (Phase, 0),
        "u2" => (U2, 0),
        "u3" | "u" | "U" => (U3, 0),
        "swap" => (Swap, 0),
        "cx" | "CX" => (X, 1),
        "cy" => (Y, 1),
        "cz" => (Z, 1),
        "ch" => (H, 1),
        "csx" => (Sx, 1),
        "cp" | "cu1" => (Phase, 1),
        "crx" => (Rx, 1),
        "cry" => (Ry, 1),
        "crz" => (Rz, 1),
        "cu3" => (U3, 1),
        "cswap" => (Swap, 1),
        "ccx" => (X, 2),
        "c3x" => (X, 3),
        "c4x" => (X, 4),
        _ => return None,
    })
}

// ------------------------------------------------------------- parser ----

#[derive(Clone, Debug)]
enum BodyStmt {
    Apply {
        name: String,
        pos: (u32, u32),
        params: Vec<Expr>,
        /// Indices into the definition's formal qubit list.
        qubits: Vec<usize>,
    },
    Barrier,
}

#[derive(Debug)]
struct GateDef {
    n_params: usize,
    n_qubits: usize,
    body: Vec<BodyStmt>,
}

#[derive(Clone, Debug)]
enum QubitArg {
    Indexed(usize),
    /// Register offset and size, broadcast over all elements.
    Whole(usize, usize),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qregs: Vec<(String, usize, usize)>,
    cregs: HashMap<String, usize>,
    defs: HashMap<String, Rc<GateDef>>,
    ops: Vec<GateOp>,
    saw_measure: bool,
    dropped_measures: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        let t = self.toks.get(self.pos).cloned();
        match t {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => err(self.eof_pos(), "unexpected end of input"),
        }
    }

    fn eof_pos(&self) -> (u32, u32) {
        self.toks.last().map(|t| t.pos()).unwrap_or((1, 1))
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next()?;
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            err(t.pos(), format!("expected '{c}'"))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, (u32, u32)), ParseError> {
        let t = self.next()?;
        let pos = t.pos();
        match t.tok {
            Tok::Ident(s) => Ok((s, pos)),
            _ => err(pos, "expected identifier"),
        }
    }

    fn expect_int(&mut self) -> Result<(usize, (u32, u32)), ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Int(v) => Ok((v as usize, t.pos())),
            _ => err(t.pos(), "expected integer"),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(t) if t.tok == Tok::Sym(c))
    }

    fn total_qubits(&self) -> usize {
        self.qregs.iter().map(|(_, size, _)| size).sum()
    }

    fn find_qreg(&self, name: &str) -> Option<(usize, usize)> {
        self.qregs
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|&(_, size, offset)| (offset, size))
    }

    // ------------------------------------------------------ statements --

    fn parse_program(&mut self) -> Result<(), ParseError> {
        self.parse_header()?;
        while self.peek().is_some() {
            self.parse_statement()?;
        }
        Ok(())
    }

    fn parse_header(&mut self) -> Result<(), ParseError> {
        let t = self.next()?;
        if t.tok != Tok::Ident("OPENQASM".into()) {
            return err(t.pos(), "expected 'OPENQASM 2.0;' header");
        }
        let v = self.next()?;
        let ok = matches!(v.tok, Tok::Real(x) if x == 2.0) || matches!(v.tok, Tok::Int(2));
        if !ok {
            return err(v.pos(), "only OpenQASM version 2.0 is supported");
        }
        self.expect_sym(';')
    }

    fn parse_statement(&mut self) -> Result<(), ParseError> {
        let t = self.next()?;
        let pos = t.pos();
        let word = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => return err(pos, "expected a statement"),
        };
        match word.as_str() {
            "include" => {
                let f = self.next()?;
                let fpos = f.pos();
                match f.tok {
                    Tok::Str(s) if s == "qelib1.inc" => {}
                    Tok::Str(s) => {
                        return err(fpos, format!("cannot include '{s}', only qelib1.inc is built in"))
                    }
                    _ => return err(fpos, "expected include file name"),
                }
                self.expect_sym(';')
            }
            "qreg" => {
                let (name, npos) = self.expect_ident()?;
                self.expect_sym('[')?;
                let (size, spos) = self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if size == 0 {
                    return err(spos, "register size must be positive");
                }
                if self.find_qreg(&name).is_some() || self.cregs.contains_key(&name) {
                    return err(npos, format!("register '{name}' is already declared"));
                }
                let offset = self.total_qubits();
                self.qregs.push((name, size, offset));
                Ok(())
            }
            "creg" => {
                let (name, npos) = self.expect_ident()?;
                self.expect_sym('[')?;
                let (size, _) = self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if self.find_qreg(&name).is_some() || self.cregs.contains_key(&name) {
                    return err(npos, format!("register '{name}' is already declared"));
                }
                self.cregs.insert(name, size);
                Ok(())
            }
            "gate" => self.parse_gate_def(),
            "barrier" => {
                while !self.at_sym(';') {
                    let (name, npos) = self.expect_ident()?;
                    if self.find_qreg(&name).is_none() {
                        return err(npos, format!("unknown quantum register '{name}'"));
                    }
                    if self.at_sym('[') {
                        self.expect_sym('[')?;
                        let (idx, ipos) = self.expect_int()?;
                        self.expect_sym(']')?;
                        let (_, size) = self.find_qreg(&name).unwrap();
                        if idx >= size {
                            return err(ipos, format!("index {idx} out of range for '{name}'"));
                        }
                    }
                    if self.at_sym(',') {
                        self.expect_sym(',')?;
                    }
                }
                self.expect_sym(';')
            }
            "measure" => self.parse_measure(pos),
            "reset" | "if" | "opaque" => err(pos, format!("unsupported statement '{word}'")),
            _ => self.parse_application(word, pos),
        }
    }

    fn parse_measure(&mut self, pos: (u32, u32)) -> Result<(), ParseError> {
        let (qname, qpos) = self.expect_ident()?;
        let (qoffset, qsize) = match self.find_qreg(&qname) {
            Some(v) => v,
            None => return err(qpos, format!("unknown quantum register '{qname}'")),
        };
        let qidx = if self.at_sym('[') {
            self.expect_sym('[')?;
            let (idx, ipos) = self.expect_int()?;
            self.expect_sym(']')?;
            if idx >= qsize {
                return err(ipos, format!("index {idx} out of range for '{qname}'"));
            }
            Some(idx)
        } else {
            None
        };
        let t = self.next()?;
        if t.tok != Tok::Arrow {
            return err(t.pos(), "expected '->'");
        }
        let (cname, cpos) = self.expect_ident()?;
        let csize = match self.cregs.get(&cname) {
            Some(&v) => v,
            None => return err(cpos, format!("unknown classical register '{cname}'")),
        };
        if self.at_sym('[') {
            self.expect_sym('[')?;
            let (idx, ipos) = self.expect_int()?;
            self.expect_sym(']')?;
            if idx >= csize {
                return err(ipos, format!("index {idx} out of range for '{cname}'"));
            }
            if qidx.is_none() {
                return err(pos, "cannot measure a whole register into one bit");
            }
        } else if qidx.is_none() && qsize != csize {
            return err(pos, "measured registers have different sizes");
        }
        self.expect_sym(';')?;
        let _ = qoffset;
        self.saw_measure = true;
        self.dropped_measures += 1;
        Ok(())
    }

    fn parse_gate_def(&mut self) -> Result<(), ParseError> {
        let (name, npos) = self.expect_ident()?;
        if builtin(&name).is_some() || name == "mcx" || self.defs.contains_key(&name) {
            return err(npos, format!("gate '{name}' is already defined"));
        }
        let mut formal_params = Vec::new();
        if self.at_sym('(') {
            self.expect_sym('(')?;
            while !self.at_sym(')') {
                let (p, ppos) = self.expect_ident()?;
                if formal_params.contains(&p) {
                    return err(ppos, format!("duplicate parameter '{p}'"));
                }
                formal_params.push(p);
                if self.at_sym(',') {
                    self.expect_sym(',')?;
                }
            }
            self.expect_sym(')')?;
        }
        let mut formal_qubits: Vec<String> = Vec::new();
        loop {
            let (q, qpos) = self.expect_ident()?;
            if formal_qubits.contains(&q) {
                return err(qpos, format!("duplicate qubit argument '{q}'"));
            }
            formal_qubits.push(q);
            if self.at_sym(',') {
                self.expect_sym(',')?;
            } else {
                break;
            }
        }
        self.expect_sym('{')?;
        let mut body = Vec::new();
        while !self.at_sym('}') {
            let (word, wpos) = self.expect_ident()?;
            if word == "barrier" {
                while !self.at_sym(';') {
                    let _ = self.expect_ident()?;
                    if self.at_sym(',') {
                        self.expect_sym(',')?;
                    }
                }
                self.expect_sym(';')?;
                body.push(BodyStmt::Barrier);
                continue;
            }
            let known = builtin(&word).is_some() || word == "mcx" || self.defs.contains_key(&word);
            if !known {
                return err(wpos, format!("unknown gate '{word}'"));
            }
            let mut params = Vec::new();
            if self.at_sym('(') {
                self.expect_sym('(')?;
                while !self.at_sym(')') {
                    params.push(self.parse_expr(&formal_params)?);
                    if self.at_sym(',') {
                        self.expect_sym(',')?;
                    }
                }
                self.expect_sym(')')?;
            }
            let mut qubits = Vec::new();
            loop {
                let (q, qpos) = self.expect_ident()?;
                match formal_qubits.iter().position(|f| f == &q) {
                    Some(i) => qubits.push(i),
                    None => return err(qpos, format!("unknown qubit argument '{q}'")),
                }
                if self.at_sym(',') {
                    self.expect_sym(',')?;
                } else {
                    break;
                }
            }
            self.expect_sym(';')?;
            body.push(BodyStmt::Apply {
                name: word,
                pos: wpos,
                params,
                qubits,
            });
        }
        self.expect_sym('}')?;
        self.defs.insert(
            name,
            Rc::new(GateDef {
                n_params: formal_params.len(),
                n_qubits: formal_qubits.len(),
                body,
            }),
        );
        Ok(())
    }

    fn parse_application(&mut self, name: String, pos: (u32, u32)) -> Result<(), ParseError> {
        let known = builtin(&name).is_some() || name == "mcx" || self.defs.contains_key(&name);
        if !known {
            return err(pos, format!("unknown gate '{name}'"));
        }
        if self.saw_measure {
            return err(pos, "gate after measurement; only trailing measurements are supported");
        }
        let mut params = Vec::new();
        if self.at_sym('(') {
            self.expect_sym('(')?;
            while !self.at_sym(')') {
                let e = self.parse_expr(&[])?;
                params.push(e.eval(&[]));
                if self.at_sym(',') {
                    self.expect_sym(',')?;
                }
            }
            self.expect_sym(')')?;
        }
        let mut args = Vec::new();
        loop {
            let (rname, rpos) = self.expect_ident()?;
            let (offset, size) = match self.find_qreg(&rname) {
                Some(v) => v,
                None => return err(rpos, format!("unknown quantum register '{rname}'")),
            };
            if self.at_sym('[') {
                self.expect_sym('[')?;
                let (idx, ipos) = self.expect_int()?;
                self.expect_sym(']')?;
                if idx >= size {
                    return err(ipos, format!("index {idx} out of range for '{rname}'"));
                }
                args.push(QubitArg::Indexed(offset + idx));
            } else {
                args.push(QubitArg::Whole(offset, size));
            }
            if self.at_sym(',') {
                self.expect_sym(',')?;
            } else {
                break;
            }
        }
        self.expect_sym(';')?;
        let mut broadcast = None;
        for a in &args {
            if let QubitArg::Whole(_, size) = a {
                match broadcast {
                    None => broadcast = Some(*size),
                    Some(prev) if prev == *size => {}
                    Some(_) => return err(pos, "mismatched register sizes in broadcast"),
                }
            }
        }
        for step in 0..broadcast.unwrap_or(1) {
            let concrete: Vec<usize> = args
                .iter()
                .map(|a| match a {
                    QubitArg::Indexed(q) => *q,
                    QubitArg::Whole(offset, _) => offset + step,
                })
                .collect();
            self.apply_named(&name, pos, &params, &concrete, 0)?;
        }
        Ok(())
    }

    fn apply_named(
        &mut self,
        name: &str,
        pos: (u32, u32),
        params: &[f64],
        qubits: &[usize],
        depth: usize,
    ) -> Result<(), ParseError> {
        if depth > MAX_EXPANSION_DEPTH {
            return err(pos, format!("gate expansion deeper than {MAX_EXPANSION_DEPTH}"));
        }
        if let Some(def) = self.defs.get(name).cloned() {
            if params.len() != def.n_params {
                return err(
                    pos,
                    format!("'{name}' expects {} parameter(s), got {}", def.n_params, params.len()),
                );
            }
            if qubits.len() != def.n_qubits {
                return err(
                    pos,
                    format!("'{name}' expects {} qubit(s), got {}", def.n_qubits, qubits.len()),
                );
            }
            for stmt in &def.body {
                match stmt {
                    BodyStmt::Barrier => {}
                    BodyStmt::Apply {
                        name: inner,
                        pos: ipos,
                        params: exprs,
                        qubits: slots,
                    } => {
                        let vals: Vec<f64> = exprs.iter().map(|e| e.eval(params)).collect();
                        let mapped: Vec<usize> = slots.iter().map(|&s| qubits[s]).collect();
                        self.apply_named(inner, *ipos, &vals, &mapped, depth + 1)?;
                    }
                }
            }
            return Ok(());
        }
        let (kind, n_controls) = if name == "mcx" {
            if qubits.len() < 2 {
                return err(pos, "mcx needs at least one control and a target");
            }
            (GateKind::X, qubits.len() - 1)
        } else {
            builtin(name).expect("caller checked the name")
        };
        let expected_q = n_controls + kind.target_arity();
        if qubits.len() != expected_q {
            return err(
                pos,
                format!("'{name}' expects {expected_q} qubit(s), got {}", qubits.len()),
            );
        }
        if params.len() != kind.param_arity() {
            return err(
                pos,
                format!(
                    "'{name}' expects {} parameter(s), got {}",
                    kind.param_arity(),
                    params.len()
                ),
            );
        }
        let op = GateOp::new(
            kind,
            qubits[..n_controls].to_vec(),
            qubits[n_controls..].to_vec(),
            params.to_vec(),
        )
        .map_err(|e| ParseError {
            line: pos.0,
            col: pos.1,
            msg: e.to_string(),
        })?;
        self.ops.push(op);
        Ok(())
    }

    // ------------------------------------------------------ expressions --

    fn parse_expr(&mut self, scope: &[String]) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term(scope)?;
        loop {
            if self.at_sym('+') {
                self.expect_sym('+')?;
                lhs = Expr::Add(Box::new(lhs), Box::new(self.parse_term(scope)?));
            } else if self.at_sym('-') {
                self.expect_sym('-')?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.parse_term(scope)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_term(&mut self, scope: &[String]) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_factor(scope)?;
        loop {
            if self.at_sym('*') {
                self.expect_sym('*')?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.parse_factor(scope)?));
            } else if self.at_sym('/') {
                self.expect_sym('/')?;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.parse_factor(scope)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_factor(&mut self, scope: &[String]) -> Result<Expr, ParseError> {
        let t = self.next()?;
        let pos = t.pos();
        match t.tok {
            Tok::Sym('-') => Ok(Expr::Neg(Box::new(self.parse_factor(scope)?))),
            Tok::Sym('(') => {
                let e = self.parse_expr(scope)?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Int(v) => Ok(Expr::Const(v as f64)),
            Tok::Real(v) => Ok(Expr::Const(v)),
            Tok::Ident(s) if s == "pi" => Ok(Expr::Pi),
            Tok::Ident(s) => match scope.iter().position(|p| p == &s) {
                Some(i) => Ok(Expr::Param(i)),
                None => err(pos, format!("unknown identifier '{s}' in expression")),
            },
            _ => err(pos, "expected expression"),
        }
    }
}

/// Parses a full OpenQASM 2.0 program into a flat circuit.
pub fn parse_qasm(src: &str) -> Result<ParsedProgram, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        qregs: Vec::new(),
        cregs: HashMap::new(),
        defs: HashMap::new(),
        ops: Vec::new(),
        saw_measure: false,
        dropped_measures: 0,
    };
    p.parse_program()?;
    let n = p.total_qubits();
    if n == 0 {
        return err(p.eof_pos(), "no quantum register declared");
    }
    let circuit = Circuit::from_ops("qasm", n, std::mem::take(&mut p.ops));
    let mut warnings = Vec::new();
    if p.dropped_measures > 0 {
        warnings.push(format!(
            "dropped {} trailing measurement statement(s)",
            p.dropped_measures
        ));
    }
    Ok(ParsedProgram { circuit, warnings })
}

// ------------------------------------------------------------ emitter ----

/// Serializes a circuit as OpenQASM 2.0. The output is deterministic and
/// parses back to an op-identical circuit.
pub fn emit_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits);
    for op in &c.ops {
        out.push_str(&op.name());
        if !op.params.is_empty() {
            out.push('(');
            for (i, p) in op.params.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{p}");
            }
            out.push(')');
        }
        out.push(' ');
        for (i, q) in op.qubits().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "q[{q}]");
        }
        out.push_str(";\n");
    }
    out
}

/// `emit_qasm` followed by `parse_qasm`, used to check self-consistency.
pub fn reparse(c: &Circuit) -> Result<Circuit, ParseError> {
    Ok(parse_qasm(&emit_qasm(c))?.circuit)
}
