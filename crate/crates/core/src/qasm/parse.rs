//! OpenQASM 2.0 subset reader.
//!
//! Accepts register declarations, the standard gate vocabulary, user `gate`
//! definitions (expanded inline), `barrier` (ignored) and final `measure`
//! statements (recorded as output markers). Classical control, `reset` and
//! `opaque` declarations are rejected by name.

use std::collections::HashMap;
use std::f64::consts::PI;

use num::{ToPrimitive, Zero};

use super::circuit::{Circuit, Gate, GateKind};
use super::FrontendError;
use crate::phase::{checked_add, checked_div, checked_mul, Angle, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Real(String),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: &[&str] = &["->", "==", ";", ",", "(", ")", "[", "]", "{", "}", "+", "-", "*", "/", "^"];

fn bump(chars: &[char], i: &mut usize, line: &mut usize, col: &mut usize) {
    if chars[*i] == '\n' {
        *line += 1;
        *col = 1;
    } else {
        *col += 1;
    }
    *i += 1;
}

fn lex(src: &str) -> Result<Vec<Token>, FrontendError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            bump(&chars, &mut i, &mut line, &mut col);
            continue;
        }
        if ch == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump(&chars, &mut i, &mut line, &mut col);
            }
            continue;
        }
        if ch == '/' && chars.get(i + 1) == Some(&'*') {
            let (l0, c0) = (line, col);
            bump(&chars, &mut i, &mut line, &mut col);
            bump(&chars, &mut i, &mut line, &mut col);
            loop {
                if i >= chars.len() {
                    return Err(FrontendError::Syntax { line: l0, col: c0, msg: "unterminated comment".into() });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump(&chars, &mut i, &mut line, &mut col);
                    bump(&chars, &mut i, &mut line, &mut col);
                    break;
                }
                bump(&chars, &mut i, &mut line, &mut col);
            }
            continue;
        }
        let (tl, tc) = (line, col);
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump(&chars, &mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            continue;
        }
        if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let mut s = String::new();
            let mut real = false;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                real |= chars[i] == '.';
                s.push(chars[i]);
                bump(&chars, &mut i, &mut line, &mut col);
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                real = true;
                s.push(chars[i]);
                bump(&chars, &mut i, &mut line, &mut col);
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    s.push(chars[i]);
                    bump(&chars, &mut i, &mut line, &mut col);
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump(&chars, &mut i, &mut line, &mut col);
                }
            }
            out.push(Token { tok: if real { Tok::Real(s) } else { Tok::Int(s) }, line: tl, col: tc });
            continue;
        }
        if ch == '"' {
            let mut s = String::new();
            bump(&chars, &mut i, &mut line, &mut col);
            while i < chars.len() && chars[i] != '"' {
                s.push(chars[i]);
                bump(&chars, &mut i, &mut line, &mut col);
            }
            if i >= chars.len() {
                return Err(FrontendError::Syntax { line: tl, col: tc, msg: "unterminated string".into() });
            }
            bump(&chars, &mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Str(s), line: tl, col: tc });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                for _ in sym.chars() {
                    bump(&chars, &mut i, &mut line, &mut col);
                }
                out.push(Token { tok: Tok::Sym(sym), line: tl, col: tc });
            }
            None => {
                return Err(FrontendError::Syntax { line: tl, col: tc, msg: format!("unexpected character `{ch}`") })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Value of a parameter expression before it becomes an [`Angle`].
#[derive(Clone, Copy, Debug, PartialEq)]
enum Value {
    Num(Rational),
    Pi(Rational),
    Float(f64),
}

impl Value {
    fn to_f64(self) -> f64 {
        match self {
            Value::Num(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Pi(r) => r.to_f64().unwrap_or(f64::NAN) * PI,
            Value::Float(x) => x,
        }
    }

    fn to_angle(self) -> Angle {
        match self {
            Value::Pi(r) => Angle::Pi(r),
            Value::Num(r) if r.is_zero() => Angle::zero(),
            other => Angle::Radians(other.to_f64()),
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Num(r) => Value::Num(-r),
            Value::Pi(r) => Value::Pi(-r),
            Value::Float(x) => Value::Float(-x),
        }
    }

    fn add(self, o: Value) -> Value {
        let exact = match (self, o) {
            (Value::Num(a), Value::Num(b)) => checked_add(a, b).map(Value::Num),
            (Value::Pi(a), Value::Pi(b)) => checked_add(a, b).map(Value::Pi),
            (Value::Pi(a), Value::Num(b)) | (Value::Num(b), Value::Pi(a)) if b.is_zero() => Some(Value::Pi(a)),
            _ => None,
        };
        exact.unwrap_or_else(|| Value::Float(self.to_f64() + o.to_f64()))
    }

    fn mul(self, o: Value) -> Value {
        let exact = match (self, o) {
            (Value::Num(a), Value::Num(b)) => checked_mul(a, b).map(Value::Num),
            (Value::Pi(a), Value::Num(b)) | (Value::Num(b), Value::Pi(a)) => checked_mul(a, b).map(Value::Pi),
            _ => None,
        };
        exact.unwrap_or_else(|| Value::Float(self.to_f64() * o.to_f64()))
    }

    fn div(self, o: Value) -> Value {
        let exact = match (self, o) {
            (Value::Num(a), Value::Num(b)) => checked_div(a, b).map(Value::Num),
            (Value::Pi(a), Value::Num(b)) => checked_div(a, b).map(Value::Pi),
            (Value::Pi(a), Value::Pi(b)) => checked_div(a, b).map(Value::Num),
            _ => None,
        };
        exact.unwrap_or_else(|| Value::Float(self.to_f64() / o.to_f64()))
    }
}

fn parse_decimal(s: &str) -> Value {
    if !s.contains(['e', 'E']) {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits = format!("{int}{frac}");
        if let (Ok(n), Some(d)) = (digits.parse::<i64>(), 10i64.checked_pow(frac.len() as u32)) {
            return Value::Num(Rational::new(n, d));
        }
    }
    Value::Float(s.parse::<f64>().unwrap_or(f64::NAN))
}

#[derive(Clone, Debug)]
enum Expr {
    Lit(Value),
    Param(String, usize, usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Func(String, Box<Expr>),
}

impl Expr {
    fn eval(&self, env: &HashMap<String, Value>) -> Result<Value, FrontendError> {
        Ok(match self {
            Expr::Lit(v) => *v,
            Expr::Param(name, line, col) => *env.get(name).ok_or_else(|| FrontendError::Syntax {
                line: *line,
                col: *col,
                msg: format!("unknown identifier `{name}`"),
            })?,
            Expr::Neg(e) => e.eval(env)?.neg(),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                match op {
                    '+' => x.add(y),
                    '-' => x.add(y.neg()),
                    '*' => x.mul(y),
                    '/' => x.div(y),
                    _ => Value::Float(x.to_f64().powf(y.to_f64())),
                }
            }
            Expr::Func(name, a) => {
                let x = a.eval(env)?.to_f64();
                Value::Float(match name.as_str() {
                    "sin" => x.sin(),
                    "cos" => x.cos(),
                    "tan" => x.tan(),
                    "exp" => x.exp(),
                    "ln" => x.ln(),
                    _ => x.sqrt(),
                })
            }
        })
    }
}

#[derive(Clone, Debug)]
struct BodyOp {
    name: String,
    params: Vec<Expr>,
    args: Vec<String>,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
struct GateDef {
    params: Vec<String>,
    args: Vec<String>,
    body: Vec<BodyOp>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qregs: Vec<(String, usize, usize)>,
    cregs: HashMap<String, usize>,
    defs: HashMap<String, GateDef>,
    circuit: Circuit,
}

const MAX_EXPANSION_DEPTH: usize = 64;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, FrontendError> {
        Err(FrontendError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect_sym(&mut self, sym: &str) -> Result<Token, FrontendError> {
        let t = self.next();
        match &t.tok {
            Tok::Sym(s) if *s == sym => Ok(t),
            other => self.err(&t, format!("expected `{sym}`, found {}", describe(other))),
        }
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(s) if *s == sym)
    }

    fn ident(&mut self) -> Result<(String, Token), FrontendError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            other => self.err(&t, format!("expected identifier, found {}", describe(other))),
        }
    }

    fn int(&mut self) -> Result<usize, FrontendError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) => s.parse().or_else(|_| self.err(&t, "integer out of range")),
            other => self.err(&t, format!("expected integer, found {}", describe(other))),
        }
    }

    fn program(&mut self) -> Result<(), FrontendError> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let t = self.next();
            match &t.tok {
                Tok::Real(v) | Tok::Int(v) if v.starts_with('2') => {}
                _ => return self.err(&t, "only OPENQASM 2.x is supported"),
            }
            self.expect_sym(";")?;
        }
        while self.peek().tok != Tok::Eof {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), FrontendError> {
        let (word, t) = self.ident()?;
        match word.as_str() {
            "include" => {
                let f = self.next();
                match &f.tok {
                    Tok::Str(name) if name == "qelib1.inc" => {}
                    Tok::Str(name) => {
                        return Err(FrontendError::Unsupported {
                            construct: format!("include \"{name}\""),
                            line: f.line,
                            col: f.col,
                        })
                    }
                    other => return self.err(&f, format!("expected file name, found {}", describe(other))),
                }
                self.expect_sym(";")?;
            }
            "qreg" | "creg" => {
                let (name, _) = self.ident()?;
                self.expect_sym("[")?;
                let size = self.int()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                if word == "qreg" {
                    if self.qregs.iter().any(|(n, _, _)| *n == name) {
                        return self.err(&t, format!("register `{name}` declared twice"));
                    }
                    self.qregs.push((name, self.circuit.num_qubits, size));
                    self.circuit.num_qubits += size;
                } else {
                    self.cregs.insert(name, size);
                }
            }
            "gate" => self.gate_def()?,
            "opaque" | "if" | "while" | "for" | "reset" => {
                return Err(FrontendError::Unsupported { construct: word, line: t.line, col: t.col })
            }
            "barrier" => {
                while !self.is_sym(";") {
                    if self.peek().tok == Tok::Eof {
                        return self.err(self.peek(), "unexpected end of input in barrier");
                    }
                    self.next();
                }
                self.next();
            }
            "measure" => {
                let qs = self.qarg()?;
                self.expect_sym("->")?;
                let (creg, ct) = self.ident()?;
                if !self.cregs.contains_key(&creg) {
                    return self.err(&ct, format!("undeclared classical register `{creg}`"));
                }
                if self.is_sym("[") {
                    self.next();
                    self.int()?;
                    self.expect_sym("]")?;
                }
                self.expect_sym(";")?;
                for q in qs {
                    self.circuit.mark_measured(q);
                }
            }
            _ => self.gate_call(word, t)?,
        }
        Ok(())
    }

    fn qarg(&mut self) -> Result<Vec<usize>, FrontendError> {
        let (name, t) = self.ident()?;
        let &(_, offset, size) = match self.qregs.iter().find(|(n, _, _)| *n == name) {
            Some(r) => r,
            None => return self.err(&t, format!("undeclared quantum register `{name}`")),
        };
        if self.is_sym("[") {
            self.next();
            let it = self.peek().clone();
            let idx = self.int()?;
            self.expect_sym("]")?;
            if idx >= size {
                return self.err(&it, format!("index {idx} out of range for `{name}[{size}]`"));
            }
            Ok(vec![offset + idx])
        } else {
            Ok((offset..offset + size).collect())
        }
    }

    fn param_list(&mut self) -> Result<Vec<Expr>, FrontendError> {
        let mut params = Vec::new();
        if self.is_sym("(") {
            self.next();
            if !self.is_sym(")") {
                params.push(self.expr()?);
                while self.is_sym(",") {
                    self.next();
                    params.push(self.expr()?);
                }
            }
            self.expect_sym(")")?;
        }
        Ok(params)
    }

    fn gate_call(&mut self, name: String, t: Token) -> Result<(), FrontendError> {
        let params = self.param_list()?;
        let mut args = vec![self.qarg()?];
        while self.is_sym(",") {
            self.next();
            args.push(self.qarg()?);
        }
        self.expect_sym(";")?;
        let env = HashMap::new();
        let values = params.iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>, _>>()?;

        let width = args.iter().map(Vec::len).max().unwrap_or(1);
        if args.iter().any(|a| a.len() != 1 && a.len() != width) {
            return self.err(&t, format!("register size mismatch in `{name}`"));
        }
        for k in 0..width {
            let qubits: Vec<usize> = args.iter().map(|a| if a.len() == 1 { a[0] } else { a[k] }).collect();
            self.apply(&name, &values, &qubits, &t, 0)?;
        }
        Ok(())
    }

    fn apply(
        &mut self,
        name: &str,
        params: &[Value],
        qubits: &[usize],
        t: &Token,
        depth: usize,
    ) -> Result<(), FrontendError> {
        if depth > MAX_EXPANSION_DEPTH {
            return self.err(t, format!("gate `{name}` expands too deeply"));
        }
        if let Some(def) = self.defs.get(name).cloned() {
            if def.params.len() != params.len() || def.args.len() != qubits.len() {
                return self.err(t, format!("wrong number of parameters or operands for `{name}`"));
            }
            let env: HashMap<String, Value> = def.params.iter().cloned().zip(params.iter().copied()).collect();
            let qenv: HashMap<&str, usize> =
                def.args.iter().map(String::as_str).zip(qubits.iter().copied()).collect();
            for op in &def.body {
                let vals = op.params.iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>, _>>()?;
                let qs: Vec<usize> = op.args.iter().map(|a| qenv[a.as_str()]).collect();
                let tok = Token { tok: Tok::Ident(op.name.clone()), line: op.line, col: op.col };
                self.apply(&op.name, &vals, &qs, &tok, depth + 1)?;
            }
            return Ok(());
        }
        let kind = match GateKind::from_name(name) {
            Some(k) => k,
            None => return self.err(t, format!("unknown gate `{name}`")),
        };
        if kind.num_params() != params.len() || kind.num_qubits() != qubits.len() {
            return self.err(
                t,
                format!(
                    "`{name}` takes {} parameters and {} operands, got {} and {}",
                    kind.num_params(),
                    kind.num_qubits(),
                    params.len(),
                    qubits.len()
                ),
            );
        }
        let gate = Gate::new(kind, qubits, &params.iter().map(|v| v.to_angle()).collect::<Vec<_>>());
        self.circuit.push(gate).map_err(|e| match e {
            FrontendError::RepeatedOperand { gate, qubit } => FrontendError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("`{gate}` applied twice to qubit {qubit}"),
            },
            other => other,
        })
    }

    fn gate_def(&mut self) -> Result<(), FrontendError> {
        let (name, _) = self.ident()?;
        let mut params = Vec::new();
        if self.is_sym("(") {
            self.next();
            if !self.is_sym(")") {
                params.push(self.ident()?.0);
                while self.is_sym(",") {
                    self.next();
                    params.push(self.ident()?.0);
                }
            }
            self.expect_sym(")")?;
        }
        let mut args = vec![self.ident()?.0];
        while self.is_sym(",") {
            self.next();
            args.push(self.ident()?.0);
        }
        self.expect_sym("{")?;
        let mut body = Vec::new();
        while !self.is_sym("}") {
            let (op, t) = self.ident()?;
            if op == "barrier" {
                while !self.is_sym(";") {
                    self.next();
                }
                self.next();
                continue;
            }
            let ps = self.param_list()?;
            let mut oargs = Vec::new();
            loop {
                let (a, at) = self.ident()?;
                if !args.contains(&a) {
                    return self.err(&at, format!("unknown gate argument `{a}`"));
                }
                oargs.push(a);
                if !self.is_sym(",") {
                    break;
                }
                self.next();
            }
            self.expect_sym(";")?;
            body.push(BodyOp { name: op, params: ps, args: oargs, line: t.line, col: t.col });
        }
        self.expect_sym("}")?;
        self.defs.insert(name, GateDef { params, args, body });
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.term()?;
        while self.is_sym("+") || self.is_sym("-") {
            let op = if self.is_sym("+") { '+' } else { '-' };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.unary()?;
        while self.is_sym("*") || self.is_sym("/") {
            let op = if self.is_sym("*") { '*' } else { '/' };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, FrontendError> {
        if self.is_sym("-") {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.is_sym("+") {
            self.next();
            return self.unary();
        }
        let base = self.atom()?;
        if self.is_sym("^") {
            self.next();
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, FrontendError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) | Tok::Real(s) => Ok(Expr::Lit(parse_decimal(s))),
            Tok::Ident(s) if s == "pi" => Ok(Expr::Lit(Value::Pi(Rational::from_integer(1)))),
            Tok::Ident(s) if ["sin", "cos", "tan", "exp", "ln", "sqrt"].contains(&s.as_str()) => {
                self.expect_sym("(")?;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(Expr::Func(s.clone(), Box::new(e)))
            }
            Tok::Ident(s) => Ok(Expr::Param(s.clone(), t.line, t.col)),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            other => self.err(&t, format!("expected expression, found {}", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(s) | Tok::Real(s) => format!("number `{s}`"),
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parse OpenQASM 2.0 source text into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, FrontendError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        qregs: Vec::new(),
        cregs: HashMap::new(),
        defs: HashMap::new(),
        circuit: Circuit::new(0),
    };
    p.program()?;
    Ok(p.circuit)
}
