//! Line-oriented text netlists.
//!
//! ```text
//! # swap-mode gate
//! modes 4
//! wc 2 3 loss 0.03
//! rbs 1 2 0.0 0.0
//! rbs 3 4 0.0 0.0
//! wc 2 3 loss 0.03
//! ```
//!
//! One directive per line, whitespace-separated tokens, `#` starts a comment.
//! Modes are 1-based in the file and 0-based in [`Circuit`]. Directives:
//! `modes N`, `ps m phi`, `dc i j eta`, `mzi i j theta`, `rbs i j theta phi`,
//! `wc i j`, each component optionally followed by `loss <dB>`.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::components::{Circuit, Component, ComponentKind};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct NetlistError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A component directive with its source position (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct Directive<T: Real> {
    pub component: Component<T>,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetlistDocument<T: Real> {
    pub width: usize,
    pub width_line: usize,
    pub directives: Vec<Directive<T>>,
}

impl<T: Real> NetlistDocument<T> {
    pub fn to_circuit(&self) -> Result<Circuit<T>, NetlistError> {
        let mut circuit = Circuit::new(self.width).map_err(|e| NetlistError {
            line: self.width_line,
            column: 1,
            message: e.to_string(),
        })?;
        for d in &self.directives {
            circuit.push(d.component.clone()).map_err(|e| NetlistError {
                line: d.line,
                column: d.column,
                message: e.to_string(),
            })?;
        }
        Ok(circuit)
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token { text: &code[s..i], column: code[..s].chars().count() + 1 });
                start = None;
            }
            _ => {}
        }
    }
    out
}

struct LineParser<'a> {
    line: usize,
    width: usize,
    tokens: &'a [Token<'a>],
}

impl LineParser<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> NetlistError {
        NetlistError { line: self.line, column, message: message.into() }
    }

    fn mode(&self, tok: &Token<'_>) -> Result<usize, NetlistError> {
        let m: usize =
            tok.text.parse().map_err(|_| self.err(tok.column, format!("invalid mode index '{}'", tok.text)))?;
        if m == 0 {
            return Err(self.err(tok.column, format!("mode '{}' is invalid, modes are 1-based", tok.text)));
        }
        if m > self.width {
            return Err(self.err(tok.column, format!("mode {m} exceeds declared width {}", self.width)));
        }
        Ok(m - 1)
    }

    fn number<T: Real>(&self, tok: &Token<'_>) -> Result<T, NetlistError> {
        tok.text
            .parse::<T>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| self.err(tok.column, format!("invalid number '{}'", tok.text)))
    }
}

fn arity(keyword: &str) -> Option<(usize, usize)> {
    // (mode count, parameter count)
    Some(match keyword {
        "ps" => (1, 1),
        "dc" => (2, 1),
        "mzi" => (2, 1),
        "rbs" => (2, 2),
        "wc" => (2, 0),
        _ => return None,
    })
}

/// Parses a netlist document without building the circuit.
pub fn parse_document<T: Real>(text: &str) -> Result<NetlistDocument<T>, NetlistError> {
    let mut width: Option<(usize, usize)> = None;
    let mut directives = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { continue };
        let p = LineParser { line, width: width.map_or(0, |w| w.0), tokens: &tokens };
        if head.text == "modes" {
            if width.is_some() {
                return Err(p.err(head.column, "duplicate 'modes' declaration"));
            }
            if tokens.len() != 2 {
                return Err(p.err(head.column, format!("'modes' expects 1 argument, got {}", tokens.len() - 1)));
            }
            let n: usize = tokens[1]
                .text
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| p.err(tokens[1].column, format!("invalid mode count '{}'", tokens[1].text)))?;
            width = Some((n, line));
            continue;
        }
        let Some((n_modes, n_params)) = arity(head.text) else {
            return Err(p.err(head.column, format!("unknown directive '{}'", head.text)));
        };
        if width.is_none() {
            return Err(p.err(head.column, format!("missing 'modes' header before '{}'", head.text)));
        }
        let expected = n_modes + n_params;
        let args = &p.tokens[1..];
        let (body, loss) = match args.len() {
            n if n == expected => (args, None),
            n if n == expected + 2 && args[expected].text == "loss" => (&args[..expected], Some(&args[expected + 1])),
            n if n > expected && args[expected].text != "loss" => {
                return Err(p.err(
                    args[expected].column,
                    format!(
                        "'{}' expects {expected} arguments, got {n} (unexpected '{}')",
                        head.text, args[expected].text
                    ),
                ));
            }
            n if n > expected => {
                return Err(p.err(args[expected].column, "'loss' expects 1 argument"));
            }
            n => {
                return Err(p.err(head.column, format!("'{}' expects {expected} arguments, got {n}", head.text)));
            }
        };
        let modes = body[..n_modes].iter().map(|t| p.mode(t)).collect::<Result<Vec<_>, _>>()?;
        if n_modes == 2 && modes[0] == modes[1] {
            return Err(p.err(body[1].column, format!("'{}' uses mode {} twice", head.text, body[1].text)));
        }
        let params = body[n_modes..].iter().map(|t| p.number::<T>(t)).collect::<Result<Vec<_>, _>>()?;
        let kind = match head.text {
            "ps" => ComponentKind::PhaseShifter { phi: params[0] },
            "dc" => ComponentKind::DirectionalCoupler { eta_c: params[0] },
            "mzi" => ComponentKind::Mzi { theta: params[0] },
            "rbs" => ComponentKind::Rbs { theta: params[0], phi: params[1] },
            _ => ComponentKind::Crossing,
        };
        let mut component = Component::new(kind, modes);
        if let Some(tok) = loss {
            component.loss_db = p.number(tok)?;
        }
        component.validate(p.width).map_err(|e| p.err(head.column, e.to_string()))?;
        directives.push(Directive { component, line, column: head.column });
    }
    let (width, width_line) = width.ok_or(NetlistError {
        line: text.lines().count().max(1),
        column: 1,
        message: "missing 'modes' header".into(),
    })?;
    Ok(NetlistDocument { width, width_line, directives })
}

/// Parses a netlist straight into a circuit.
pub fn parse_netlist<T: Real>(text: &str) -> Result<Circuit<T>, NetlistError> {
    parse_document(text)?.to_circuit()
}

/// Writes a circuit back out; parsing the result reproduces the circuit.
pub fn serialize<T: Real>(circuit: &Circuit<T>) -> String {
    let mut out = String::new();
    writeln!(out, "modes {}", circuit.width()).unwrap();
    for c in circuit.elements() {
        write_component(&mut out, c).unwrap();
    }
    out
}

fn write_component<T: Real>(out: &mut String, c: &Component<T>) -> fmt::Result {
    let m: Vec<usize> = c.modes.iter().map(|x| x + 1).collect();
    match c.kind {
        ComponentKind::PhaseShifter { phi } => write!(out, "ps {} {phi}", m[0])?,
        ComponentKind::DirectionalCoupler { eta_c } => write!(out, "dc {} {} {eta_c}", m[0], m[1])?,
        ComponentKind::Mzi { theta } => write!(out, "mzi {} {} {theta}", m[0], m[1])?,
        ComponentKind::Rbs { theta, phi } => write!(out, "rbs {} {} {theta} {phi}", m[0], m[1])?,
        ComponentKind::Crossing => write!(out, "wc {} {}", m[0], m[1])?,
    }
    if !c.loss_db.is_zero() {
        write!(out, " loss {}", c.loss_db)?;
    }
    writeln!(out)
}
