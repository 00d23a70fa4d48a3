//! Text forms: the operator expression grammar, operator files, and the
//! presentation format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | 'x' IDX ('^' INT)? | 'd' IDX ('[' INT ']')?
//! ```
//!
//! `d1` abbreviates `d1[1]`. Products are normalized by Weyl multiplication in
//! the order written, so `d1*x1` is legal input. Coefficient literals must
//! already lie in `0..p`.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::arith::{FpConfig, MultiIndex};
use crate::chase::Level;
use crate::coherence::{Presentation, Side};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::weyl::{WeylElement, Word};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    cfg: &'a FpConfig,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<(usize, u64)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match digits.parse::<u64>() {
            Ok(v) => Ok((start, v)),
            Err(_) => self.err(start, "integer literal too large"),
        }
    }

    fn index(&mut self) -> Result<usize> {
        // no whitespace between the variable letter and its index
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return self.err(start, "expected a variable index");
        }
        let (_, idx) = self.integer()?;
        if idx == 0 || idx as usize > self.n {
            return self.err(
                start,
                format!("variable index {idx} out of range 1..={}", self.n),
            );
        }
        Ok(idx as usize - 1)
    }

    fn exponent(&mut self, what: &str) -> Result<u32> {
        let (at, e) = self.integer()?;
        u32::try_from(e).or_else(|_| self.err(at, format!("{what} too large")))
    }

    fn factor(&mut self) -> Result<WeylElement> {
        let start = self.pos;
        match self.peek() {
            Some(b'0'..=b'9') => {
                let (at, c) = self.integer()?;
                if c >= self.cfg.p() as u64 {
                    return self.err(
                        at,
                        format!("coefficient {c} is not reduced modulo {}", self.cfg.p()),
                    );
                }
                Ok(WeylElement::constant(self.n, self.cfg, c))
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.index()?;
                let mut e = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    e = self.exponent("exponent")?;
                }
                let w = Word::new(MultiIndex::unit(self.n, i, e), MultiIndex::zero(self.n));
                Ok(WeylElement::word(self.cfg, w, 1))
            }
            Some(b'd') => {
                self.pos += 1;
                let i = self.index()?;
                let mut r = 1;
                if self.peek() == Some(b'[') {
                    self.pos += 1;
                    let at = self.pos;
                    r = self.exponent("divided power")?;
                    if r == 0 {
                        return self.err(at, "d[0] is not a literal; write 1");
                    }
                    if self.peek() != Some(b']') {
                        return self.err(self.pos, "expected `]`");
                    }
                    self.pos += 1;
                }
                Ok(WeylElement::d(self.n, self.cfg, i, r))
            }
            Some(c) => self.err(self.pos, format!("unexpected `{}`", c as char)),
            None => self.err(start.max(self.pos), "unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<WeylElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<WeylElement> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                None => return Ok(acc),
                Some(c) => return self.err(self.pos, format!("unexpected `{}`", c as char)),
            }
        }
    }
}

/// Parses an operator expression and returns its normal form.
pub fn parse_operator(text: &str, n: usize, cfg: &FpConfig) -> Result<WeylElement> {
    if n == 0 {
        return Err(Error::NoVariables);
    }
    Parser {
        src: text.as_bytes(),
        pos: 0,
        n,
        cfg,
    }
    .expr()
}

/// Parses an expression that must not involve any `d` factor after
/// normalization.
pub fn parse_polynomial(text: &str, n: usize, cfg: &FpConfig) -> Result<Poly> {
    parse_operator(text, n, cfg)?
        .as_poly()
        .ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "expected a polynomial (no d factors)".into(),
        })
}

/// Canonical text of an operator; `parse_operator` inverts it.
pub fn format_operator(d: &WeylElement) -> String {
    d.to_string()
}

/// `(u_1, …, u_k)`.
pub fn format_tuple(t: &[WeylElement]) -> String {
    let parts: Vec<String> = t.iter().map(format_operator).collect();
    format!("({})", parts.join(", "))
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a).trim()
}

fn parse_kv_header(line: &str, lineno: usize, keys: &[&str]) -> Result<Vec<String>> {
    let mut values = vec![None; keys.len()];
    for tok in line.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::File {
            line: lineno,
            msg: format!("malformed header field `{tok}`"),
        })?;
        let slot = keys
            .iter()
            .position(|&key| key == k)
            .ok_or_else(|| Error::File {
                line: lineno,
                msg: format!("unknown header field `{k}`"),
            })?;
        values[slot] = Some(v.to_string());
    }
    values
        .into_iter()
        .zip(keys)
        .map(|(v, k)| {
            v.ok_or_else(|| Error::File {
                line: lineno,
                msg: format!("header is missing `{k}`"),
            })
        })
        .collect()
}

fn parse_number<T: std::str::FromStr>(s: &str, lineno: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::File {
        line: lineno,
        msg: format!("invalid {what} `{s}`"),
    })
}

fn located(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::File { .. } => e,
        other => Error::File {
            line,
            msg: other.to_string(),
        },
    }
}

/// A header `p=<prime> n=<count>` followed by `name = <expression>` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorFile {
    pub cfg: FpConfig,
    pub n: usize,
    pub entries: Vec<(String, WeylElement)>,
}

impl OperatorFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::File {
            line: 1,
            msg: "missing `p=… n=…` header".into(),
        })?;
        let fields = parse_kv_header(header, hline, &["p", "n"])?;
        let cfg =
            FpConfig::new(parse_number(&fields[0], hline, "prime")?).map_err(located(hline))?;
        let n: usize = parse_number(&fields[1], hline, "variable count")?;
        if n == 0 {
            return Err(located(hline)(Error::NoVariables));
        }
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for (lineno, line) in lines {
            let (name, expr) = line.split_once('=').ok_or_else(|| Error::File {
                line: lineno,
                msg: "expected `name = expression`".into(),
            })?;
            let name = name.trim();
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::File {
                    line: lineno,
                    msg: format!("invalid name `{name}`"),
                });
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::File {
                    line: lineno,
                    msg: format!("duplicate name `{name}`"),
                });
            }
            let value = parse_operator(expr, n, &cfg).map_err(located(lineno))?;
            entries.push((name.to_string(), value));
        }
        Ok(OperatorFile { cfg, n, entries })
    }

    /// Rejects a file whose header disagrees with explicitly given settings.
    pub fn check_settings(&self, p: Option<u64>, n: Option<usize>) -> Result<()> {
        if let Some(p) = p {
            if p != self.cfg.p() as u64 {
                return Err(Error::File {
                    line: 1,
                    msg: format!("header has p={} but p={p} was requested", self.cfg.p()),
                });
            }
        }
        if let Some(n) = n {
            if n != self.n {
                return Err(Error::File {
                    line: 1,
                    msg: format!("header has n={} but n={n} was requested", self.n),
                });
            }
        }
        Ok(())
    }

    pub fn operators(&self) -> Vec<WeylElement> {
        self.entries.iter().map(|(_, d)| d.clone()).collect()
    }

    pub fn render(&self) -> String {
        let mut out = format!("p={} n={}\n", self.cfg.p(), self.n);
        for (name, d) in &self.entries {
            let _ = writeln!(out, "{name} = {}", format_operator(d));
        }
        out
    }
}

/// Header `side=… level=… k=…`, then the `k` generators one per line, then
/// one syzygy tuple per line.
pub fn render_presentation(pres: &Presentation) -> String {
    let mut out = format!("side={} level={} k={}\n", pres.side, pres.level, pres.k());
    for g in &pres.generators {
        let _ = writeln!(out, "{}", format_operator(g));
    }
    for t in &pres.syzygies {
        let _ = writeln!(out, "{}", format_tuple(t));
    }
    out
}

pub fn parse_presentation(text: &str, n: usize, cfg: &FpConfig) -> Result<Presentation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::File {
        line: 1,
        msg: "missing `side=… level=… k=…` header".into(),
    })?;
    let fields = parse_kv_header(header, hline, &["side", "level", "k"])?;
    let side: Side = fields[0].parse().map_err(located(hline))?;
    let level = Level(parse_number(&fields[1], hline, "level")?);
    let k: usize = parse_number(&fields[2], hline, "generator count")?;
    let mut generators = Vec::with_capacity(k);
    let mut syzygies = Vec::new();
    for (lineno, line) in lines {
        if generators.len() < k {
            generators.push(parse_operator(line, n, cfg).map_err(located(lineno))?);
            continue;
        }
        let inner = line
            .strip_prefix('(')
            .and_then(|l| l.strip_suffix(')'))
            .ok_or_else(|| Error::File {
                line: lineno,
                msg: "expected a syzygy tuple `( … )`".into(),
            })?;
        let tuple: Vec<WeylElement> = inner
            .split(',')
            .map(|s| parse_operator(s, n, cfg))
            .collect::<Result<_>>()
            .map_err(located(lineno))?;
        if tuple.len() != k {
            return Err(Error::File {
                line: lineno,
                msg: format!("tuple has {} entries, expected {k}", tuple.len()),
            });
        }
        syzygies.push(tuple);
    }
    if generators.len() != k {
        return Err(Error::File {
            line: hline,
            msg: format!("expected {k} generators, found {}", generators.len()),
        });
    }
    Ok(Presentation {
        generators,
        syzygies,
        level,
        side,
    })
}
