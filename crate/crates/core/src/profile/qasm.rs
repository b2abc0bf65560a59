//! A small OpenQASM 2 subset: `qreg`/`creg` declarations, `gate` definitions
//! (inlined at the call site), `barrier` (ignored) and applications of the
//! Clifford+T vocabulary plus `rz`. Registers are flattened into one index
//! space in declaration order.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Gate, GateKind, GateList, Operands};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64, String),
    Str,
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut line = 1;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            '/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            '/' if bytes.get(i + 1) == Some(&b'*') => {
                let start = line;
                i += 2;
                loop {
                    if i + 1 >= bytes.len() {
                        return Err(Error::Syntax {
                            line: start,
                            message: "unterminated block comment".into(),
                        });
                    }
                    if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                        i += 2;
                        break;
                    }
                    if bytes[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
            }
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j] != b'"' && bytes[j] != b'\n' {
                    j += 1;
                }
                if j >= bytes.len() || bytes[j] != b'"' {
                    return Err(Error::Syntax {
                        line,
                        message: "unterminated string".into(),
                    });
                }
                out.push(Token {
                    tok: Tok::Str,
                    line,
                });
                i = j + 1;
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push(Token {
                    tok: Tok::Arrow,
                    line,
                });
                i += 2;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    line,
                });
            }
            c if c.is_ascii_digit()
                || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) =>
            {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let raw = &text[start..i];
                let value = raw.parse::<f64>().map_err(|_| Error::Syntax {
                    line,
                    message: format!("malformed number `{raw}`"),
                })?;
                out.push(Token {
                    tok: Tok::Number(value, raw.to_string()),
                    line,
                });
            }
            ';' | ',' | '[' | ']' | '(' | ')' | '{' | '}' | '+' | '-' | '*' | '/' | '^' => {
                out.push(Token {
                    tok: Tok::Sym(c),
                    line,
                });
                i += 1;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Cursor {
            toks,
            pos: 0,
            last_line: toks.last().map_or(1, |t| t.line),
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.last_line, |t| t.line)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: self.line(),
            message: message.into(),
        })
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.syntax(format!("expected `{c}`"))
        }
    }

    fn expect_ident(&mut self) -> Result<&'a str> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.syntax("expected identifier"),
        }
    }

    fn expect_uint(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Number(_, raw)) => {
                let v = raw
                    .parse::<usize>()
                    .or_else(|_| self.syntax(format!("expected integer, found `{raw}`")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.syntax("expected integer"),
        }
    }

    fn skip_statement(&mut self) -> Result<()> {
        while let Some(t) = self.next() {
            if t.tok == Tok::Sym(';') {
                return Ok(());
            }
        }
        self.syntax("missing `;`")
    }
}

#[derive(Debug)]
struct GateDef {
    params: Vec<String>,
    qargs: Vec<String>,
    body: Vec<Token>,
}

struct Register {
    offset: usize,
    size: usize,
}

#[derive(Default)]
struct Program {
    registers: HashMap<String, Register>,
    qubit_count: usize,
    defs: HashMap<String, GateDef>,
    gates: Vec<Gate>,
}

/// Variables visible inside a gate body.
struct Scope<'s> {
    params: HashMap<&'s str, f64>,
    qargs: HashMap<&'s str, usize>,
}

fn builtin(name: &str) -> Option<fn(f64) -> GateKind> {
    Some(match name {
        "t" => |_| GateKind::T,
        "tdg" => |_| GateKind::Tdg,
        "s" => |_| GateKind::S,
        "sdg" => |_| GateKind::Sdg,
        "h" => |_| GateKind::H,
        "x" => |_| GateKind::X,
        "z" => |_| GateKind::Z,
        "cx" | "CX" | "cnot" => |_| GateKind::Cnot,
        "cz" => |_| GateKind::Cz,
        "rz" => GateKind::Rz,
        _ => return None,
    })
}

fn builtin_param_count(name: &str) -> usize {
    usize::from(name == "rz")
}

/// Parse QASM-subset text into a flat gate list in program order.
pub fn parse_qasm(text: &str) -> Result<GateList> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let mut prog = Program::default();
    while !cur.at_end() {
        statement(&mut cur, &mut prog)?;
    }
    if prog.registers.is_empty() {
        return Err(Error::Syntax {
            line: cur.last_line,
            message: "no qubit register declared".into(),
        });
    }
    Ok(GateList::from_validated(prog.qubit_count, prog.gates))
}

fn statement(cur: &mut Cursor<'_>, prog: &mut Program) -> Result<()> {
    let line = cur.line();
    let head = cur.expect_ident()?;
    match head {
        "OPENQASM" => {
            match cur.next().map(|t| &t.tok) {
                Some(Tok::Number(..)) => {}
                _ => return cur.syntax("expected version number"),
            }
            cur.expect_sym(';')
        }
        "include" => {
            match cur.next().map(|t| &t.tok) {
                Some(Tok::Str) => {}
                _ => return cur.syntax("expected file name"),
            }
            cur.expect_sym(';')
        }
        "qreg" | "creg" => {
            let name = cur.expect_ident()?;
            cur.expect_sym('[')?;
            let size = cur.expect_uint()?;
            cur.expect_sym(']')?;
            cur.expect_sym(';')?;
            if head == "qreg" {
                if size == 0 {
                    return Err(Error::Syntax {
                        line,
                        message: format!("register `{name}` has size 0"),
                    });
                }
                if prog.registers.contains_key(name) {
                    return Err(Error::Syntax {
                        line,
                        message: format!("register `{name}` redeclared"),
                    });
                }
                prog.registers.insert(
                    name.to_string(),
                    Register {
                        offset: prog.qubit_count,
                        size,
                    },
                );
                prog.qubit_count += size;
            }
            Ok(())
        }
        "barrier" => cur.skip_statement(),
        "gate" => gate_definition(cur, prog),
        "measure" | "reset" | "if" | "opaque" => Err(Error::UnsupportedGate {
            line,
            name: head.to_string(),
        }),
        name => {
            let params = param_list(cur, None)?;
            let mut args = Vec::new();
            loop {
                args.push(register_arg(cur, prog)?);
                if !cur.eat_sym(',') {
                    break;
                }
            }
            cur.expect_sym(';')?;
            let width = args.iter().map(Vec::len).max().unwrap_or(1);
            if args.iter().any(|a| a.len() != 1 && a.len() != width) {
                return Err(Error::Syntax {
                    line,
                    message: "mismatched register sizes in broadcast".into(),
                });
            }
            for k in 0..width {
                let qubits: Vec<usize> = args
                    .iter()
                    .map(|a| if a.len() == 1 { a[0] } else { a[k] })
                    .collect();
                apply(prog, name, &params, &qubits, line, 0)?;
            }
            Ok(())
        }
    }
}

fn register_arg(cur: &mut Cursor<'_>, prog: &Program) -> Result<Vec<usize>> {
    let line = cur.line();
    let name = cur.expect_ident()?;
    let reg = prog.registers.get(name).ok_or_else(|| Error::Syntax {
        line,
        message: format!("unknown register `{name}`"),
    })?;
    if cur.eat_sym('[') {
        let idx = cur.expect_uint()?;
        cur.expect_sym(']')?;
        if idx >= reg.size {
            return Err(Error::OperandOutOfRange {
                line,
                message: format!("{name}[{idx}] but `{name}` has {} qubits", reg.size),
            });
        }
        Ok(vec![reg.offset + idx])
    } else {
        Ok((reg.offset..reg.offset + reg.size).collect())
    }
}

fn gate_definition(cur: &mut Cursor<'_>, prog: &mut Program) -> Result<()> {
    let line = cur.line();
    let name = cur.expect_ident()?.to_string();
    let mut params = Vec::new();
    if cur.eat_sym('(') && !cur.eat_sym(')') {
        loop {
            params.push(cur.expect_ident()?.to_string());
            if !cur.eat_sym(',') {
                break;
            }
        }
        cur.expect_sym(')')?;
    }
    let mut qargs = Vec::new();
    loop {
        qargs.push(cur.expect_ident()?.to_string());
        if !cur.eat_sym(',') {
            break;
        }
    }
    cur.expect_sym('{')?;
    let start = cur.pos;
    let mut depth = 1;
    while depth > 0 {
        match cur.next().map(|t| &t.tok) {
            Some(Tok::Sym('{')) => depth += 1,
            Some(Tok::Sym('}')) => depth -= 1,
            Some(_) => {}
            None => {
                return Err(Error::Syntax {
                    line,
                    message: format!("unterminated body of gate `{name}`"),
                })
            }
        }
    }
    let body = cur.toks[start..cur.pos - 1].to_vec();
    if builtin(&name).is_some() || prog.defs.contains_key(&name) {
        return Err(Error::Syntax {
            line,
            message: format!("gate `{name}` redefined"),
        });
    }
    prog.defs.insert(
        name,
        GateDef {
            params,
            qargs,
            body,
        },
    );
    Ok(())
}

fn param_list(cur: &mut Cursor<'_>, scope: Option<&Scope<'_>>) -> Result<Vec<f64>> {
    let mut params = Vec::new();
    if cur.eat_sym('(') {
        if cur.eat_sym(')') {
            return Ok(params);
        }
        loop {
            params.push(expr(cur, scope)?);
            if !cur.eat_sym(',') {
                break;
            }
        }
        cur.expect_sym(')')?;
    }
    Ok(params)
}

const MAX_INLINE_DEPTH: usize = 64;

fn apply(
    prog: &mut Program,
    name: &str,
    params: &[f64],
    qubits: &[usize],
    line: usize,
    depth: usize,
) -> Result<()> {
    if let Some(make) = builtin(name) {
        let want = builtin_param_count(name);
        if params.len() != want {
            return Err(Error::Syntax {
                line,
                message: format!("`{name}` takes {want} parameter(s), got {}", params.len()),
            });
        }
        let kind = make(params.first().copied().unwrap_or(0.0));
        let operands = match (kind.arity(), qubits) {
            (1, &[q]) => Operands::One(q),
            (2, &[a, b]) => {
                if a == b {
                    return Err(Error::Syntax {
                        line,
                        message: format!("`{name}` applied to the same qubit twice"),
                    });
                }
                Operands::Two(a, b)
            }
            (n, _) => {
                return Err(Error::Syntax {
                    line,
                    message: format!("`{name}` takes {n} qubit(s), got {}", qubits.len()),
                })
            }
        };
        if let GateKind::Rz(a) = kind {
            if !a.is_finite() {
                return Err(Error::Syntax {
                    line,
                    message: "non-finite rotation angle".into(),
                });
            }
        }
        prog.gates.push(Gate { kind, operands });
        return Ok(());
    }
    if depth >= MAX_INLINE_DEPTH {
        return Err(Error::Syntax {
            line,
            message: "gate definitions nested too deeply".into(),
        });
    }
    let def = prog
        .defs
        .remove(name)
        .ok_or_else(|| Error::UnsupportedGate {
            line,
            name: name.to_string(),
        })?;
    let result = expand(prog, &def, name, params, qubits, line, depth);
    prog.defs.insert(name.to_string(), def);
    result
}

fn expand(
    prog: &mut Program,
    def: &GateDef,
    name: &str,
    params: &[f64],
    qubits: &[usize],
    line: usize,
    depth: usize,
) -> Result<()> {
    if params.len() != def.params.len() || qubits.len() != def.qargs.len() {
        return Err(Error::Syntax {
            line,
            message: format!(
                "`{name}` expects {} parameter(s) and {} qubit(s)",
                def.params.len(),
                def.qargs.len()
            ),
        });
    }
    let scope = Scope {
        params: def
            .params
            .iter()
            .map(String::as_str)
            .zip(params.iter().copied())
            .collect(),
        qargs: def
            .qargs
            .iter()
            .map(String::as_str)
            .zip(qubits.iter().copied())
            .collect(),
    };
    let mut cur = Cursor::new(&def.body);
    while !cur.at_end() {
        let body_line = cur.line();
        let callee = cur.expect_ident()?;
        if callee == "barrier" {
            cur.skip_statement()?;
            continue;
        }
        let sub_params = param_list(&mut cur, Some(&scope))?;
        let mut sub_qubits = Vec::new();
        loop {
            let arg_line = cur.line();
            let arg = cur.expect_ident()?;
            let q = *scope.qargs.get(arg).ok_or_else(|| Error::Syntax {
                line: arg_line,
                message: format!("unknown qubit argument `{arg}` in gate `{name}`"),
            })?;
            sub_qubits.push(q);
            if !cur.eat_sym(',') {
                break;
            }
        }
        cur.expect_sym(';')?;
        apply(prog, callee, &sub_params, &sub_qubits, body_line, depth + 1)?;
    }
    Ok(())
}

fn expr(cur: &mut Cursor<'_>, scope: Option<&Scope<'_>>) -> Result<f64> {
    let mut acc = term(cur, scope)?;
    loop {
        if cur.eat_sym('+') {
            acc += term(cur, scope)?;
        } else if cur.eat_sym('-') {
            acc -= term(cur, scope)?;
        } else {
            return Ok(acc);
        }
    }
}

fn term(cur: &mut Cursor<'_>, scope: Option<&Scope<'_>>) -> Result<f64> {
    let mut acc = power(cur, scope)?;
    loop {
        if cur.eat_sym('*') {
            acc *= power(cur, scope)?;
        } else if cur.eat_sym('/') {
            acc /= power(cur, scope)?;
        } else {
            return Ok(acc);
        }
    }
}

fn power(cur: &mut Cursor<'_>, scope: Option<&Scope<'_>>) -> Result<f64> {
    let base = unary(cur, scope)?;
    if cur.eat_sym('^') {
        Ok(base.powf(power(cur, scope)?))
    } else {
        Ok(base)
    }
}

fn unary(cur: &mut Cursor<'_>, scope: Option<&Scope<'_>>) -> Result<f64> {
    if cur.eat_sym('-') {
        return Ok(-unary(cur, scope)?);
    }
    if cur.eat_sym('+') {
        return unary(cur, scope);
    }
    if cur.eat_sym('(') {
        let v = expr(cur, scope)?;
        cur.expect_sym(')')?;
        return Ok(v);
    }
    match cur.peek() {
        Some(Tok::Number(v, _)) => {
            cur.pos += 1;
            Ok(*v)
        }
        Some(Tok::Ident(id)) if id == "pi" => {
            cur.pos += 1;
            Ok(std::f64::consts::PI)
        }
        Some(Tok::Ident(id)) => match scope.and_then(|s| s.params.get(id.as_str())) {
            Some(&v) => {
                cur.pos += 1;
                Ok(v)
            }
            None => cur.syntax(format!("unknown parameter `{id}`")),
        },
        _ => cur.syntax("expected expression"),
    }
}

/// Serialize a gate list with a single register `q`. Angles are printed in
/// shortest round-trip form so that re-parsing reproduces them exactly.
pub fn to_qasm(g: &GateList) -> String {
    let mut s = String::with_capacity(32 + g.len() * 16);
    s.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(s, "qreg q[{}];", g.qubit_count());
    for gate in g.gates() {
        let name = gate.kind.qasm_name();
        match gate.kind {
            GateKind::Rz(a) => {
                let _ = write!(s, "{name}({a:e})");
            }
            _ => s.push_str(name),
        }
        match gate.operands {
            Operands::One(q) => {
                let _ = writeln!(s, " q[{q}];");
            }
            Operands::Two(a, b) => {
                let _ = writeln!(s, " q[{a}],q[{b}];");
            }
        }
    }
    s
}
