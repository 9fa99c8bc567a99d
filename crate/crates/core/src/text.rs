//! Line-oriented text formats for patterns, circuits and scheme patterns.
//!
//! ```text
//! pattern v=1..3 in=1 out=3
//! E 1 3
//! M 1 angle=0
//! X 2 s=1
//! M 2 angle=1/4pi s=1 t=!
//! ```
//!
//! Id lists are comma separated and the register also takes `a..b` runs.
//! A signal is an id list, optionally prefixed by `!` for a constant 1.
//! Blank lines and lines starting with `#` are skipped.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pattern::{Command, Pattern, QubitId, Signal};
use crate::schemes::{SchemeCommand, SchemePattern};

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Pattern(Pattern),
    Circuit(Circuit),
    /// Scheme name and pattern.
    Scheme(String, SchemePattern),
}

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

impl<'a> Tok<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            column: self.col,
            message: message.into(),
        })
    }

    /// Column of byte offset `at` inside this token.
    fn sub(&self, at: usize, text: &'a str) -> Tok<'a> {
        Tok {
            line: self.line,
            col: self.col + self.text[..at].chars().count(),
            text,
        }
    }

    fn value(&self, key: &str) -> Option<Tok<'a>> {
        let rest = self.text.strip_prefix(key)?.strip_prefix('=')?;
        Some(self.sub(key.len() + 1, rest))
    }

    fn id(&self) -> Result<QubitId> {
        match self.text.parse::<u32>() {
            Ok(v) => Ok(QubitId(v)),
            Err(_) => self.err(format!("expected a qubit id, found `{}`", self.text)),
        }
    }

    fn items(&self) -> Vec<Tok<'a>> {
        if self.text.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut at = 0;
        for part in self.text.split(',') {
            out.push(self.sub(at, part));
            at += part.len() + 1;
        }
        out
    }

    fn ids(&self) -> Result<Vec<QubitId>> {
        self.items().iter().map(Tok::id).collect()
    }

    fn register(&self) -> Result<BTreeSet<QubitId>> {
        let mut out = BTreeSet::new();
        for it in self.items() {
            if let Some((a, b)) = it.text.split_once("..") {
                let lo = it.sub(0, a).id()?;
                let hi = it.sub(a.len() + 2, b).id()?;
                if lo > hi {
                    return it.err("empty range");
                }
                out.extend((lo.0..=hi.0).map(QubitId));
            } else {
                out.insert(it.id()?);
            }
        }
        Ok(out)
    }

    fn signal(&self) -> Result<Signal> {
        let (neg, body) = match self.text.strip_prefix('!') {
            Some(rest) => (true, self.sub(1, rest)),
            None => (false, *self),
        };
        let mut s = Signal::empty();
        for q in body.ids()? {
            if s.contains(q) {
                return self.err(format!("{q} repeated in signal"));
            }
            s.toggle(q);
        }
        Ok(s.with_constant(neg))
    }

    fn angle(&self) -> Result<Angle> {
        parse_angle(self.text).map_or_else(|| self.err(format!("bad angle `{}`", self.text)), Ok)
    }
}

/// `0`, `<p>pi`, `<p>/<q>pi`, each optionally followed by `±<k>a0`; a bare
/// `<k>a0` is accepted too.
pub fn parse_angle(s: &str) -> Option<Angle> {
    let (pi_part, a0) = match s.strip_suffix("a0") {
        Some(head) => {
            let cut = head.rfind(['+', '-']).unwrap_or(0);
            let k: i64 = head[cut..].parse().ok()?;
            (&head[..cut], k)
        }
        None => (s, 0),
    };
    let (num, den) = if pi_part.is_empty() || pi_part == "0" {
        (0, 1)
    } else {
        let body = pi_part.strip_suffix("pi")?;
        match body.split_once('/') {
            Some((p, q)) => (p.parse().ok()?, q.parse::<i64>().ok().filter(|&q| q != 0)?),
            None if body.is_empty() => (1, 1),
            None if body == "-" => (-1, 1),
            None => (body.parse().ok()?, 1),
        }
    };
    Some(Angle::new(num, den, a0))
}

fn lines(text: &str) -> impl Iterator<Item = Vec<Tok<'_>>> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim_end();
        if l.trim_start().is_empty() || l.trim_start().starts_with('#') {
            return None;
        }
        let mut toks = Vec::new();
        let mut start = None;
        for (ci, (bi, ch)) in l
            .char_indices()
            .enumerate()
            .chain([(l.chars().count(), (l.len(), ' '))])
        {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some((ci, bi)),
                (true, Some((c0, b0))) => {
                    toks.push(Tok {
                        line: i + 1,
                        col: c0 + 1,
                        text: &l[b0..bi],
                    });
                    start = None;
                }
                _ => {}
            }
        }
        Some(toks)
    })
}

struct Header {
    register: BTreeSet<QubitId>,
    inputs: Vec<QubitId>,
    outputs: Vec<QubitId>,
    scheme: Option<String>,
}

fn header(toks: &[Tok]) -> Result<Header> {
    let mut h = Header {
        register: BTreeSet::new(),
        inputs: Vec::new(),
        outputs: Vec::new(),
        scheme: None,
    };
    let mut seen = [false; 3];
    for t in &toks[1..] {
        if let Some(v) = t.value("v") {
            h.register = v.register()?;
            seen[0] = true;
        } else if let Some(v) = t.value("in") {
            h.inputs = v.ids()?;
            seen[1] = true;
        } else if let Some(v) = t.value("out") {
            h.outputs = v.ids()?;
            seen[2] = true;
        } else if let (Some(v), "schemepattern") = (t.value("scheme"), toks[0].text) {
            h.scheme = Some(v.text.to_string());
        } else {
            return t.err(format!("unexpected `{}` in header", t.text));
        }
    }
    for (ok, key) in seen.iter().zip(["v", "in", "out"]) {
        if !ok {
            return toks[0].err(format!("header lacks `{key}=`"));
        }
    }
    if toks[0].text == "schemepattern" && h.scheme.is_none() {
        return toks[0].err("header lacks `scheme=`");
    }
    for (list, what) in [(&h.inputs, "input"), (&h.outputs, "output")] {
        if let Some(q) = list.iter().find(|q| !h.register.contains(q)) {
            return toks[0].err(format!("{what} {q} outside the register"));
        }
    }
    Ok(h)
}

fn arity(toks: &[Tok], min: usize, max: usize) -> Result<()> {
    let n = toks.len() - 1;
    if n < min || n > max {
        let t = toks.get(max + 1).unwrap_or(&toks[0]);
        return t.err(format!(
            "`{}` takes {min}..={max} arguments, found {n}",
            toks[0].text
        ));
    }
    Ok(())
}

fn member(t: &Tok, reg: &BTreeSet<QubitId>) -> Result<QubitId> {
    let q = t.id()?;
    if !reg.contains(&q) {
        return t.err(format!("{q} outside the register"));
    }
    Ok(q)
}

/// Options `key=value` after the positional arguments, each at most once.
fn options<'a>(toks: &[Tok<'a>], keys: &[&str]) -> Result<Vec<Option<Tok<'a>>>> {
    let mut out = vec![None; keys.len()];
    for t in toks {
        let Some(k) = keys.iter().position(|k| t.value(k).is_some()) else {
            return t.err(format!("unexpected `{}`", t.text));
        };
        if out[k].is_some() {
            return t.err(format!("`{}=` given twice", keys[k]));
        }
        out[k] = t.value(keys[k]);
    }
    Ok(out)
}

fn signal_in(t: &Tok, reg: &BTreeSet<QubitId>) -> Result<Signal> {
    let s = t.signal()?;
    if let Some(q) = s.outcomes().iter().find(|q| !reg.contains(q)) {
        return t.err(format!("signal reads {q} outside the register"));
    }
    Ok(s)
}

fn pattern_command(toks: &[Tok], reg: &BTreeSet<QubitId>) -> Result<Command> {
    let op = toks[0];
    match op.text {
        "E" => {
            arity(toks, 2, 2)?;
            Ok(Command::Entangle(
                member(&toks[1], reg)?,
                member(&toks[2], reg)?,
            ))
        }
        "M" => {
            arity(toks, 2, 4)?;
            let q = member(&toks[1], reg)?;
            let o = options(&toks[2..], &["angle", "s", "t"])?;
            let Some(a) = o[0] else {
                return op.err("measurement lacks `angle=`");
            };
            let sig = |t: Option<Tok>| t.map_or(Ok(Signal::empty()), |t| signal_in(&t, reg));
            Ok(Command::Measure {
                qubit: q,
                angle: a.angle()?,
                s_domain: sig(o[1])?,
                t_domain: sig(o[2])?,
            })
        }
        "X" | "Z" => {
            arity(toks, 2, 2)?;
            let q = member(&toks[1], reg)?;
            let key = if op.text == "X" { "s" } else { "t" };
            let Some(v) = toks[2].value(key) else {
                return toks[2].err(format!("expected `{key}=`"));
            };
            let s = signal_in(&v, reg)?;
            Ok(if op.text == "X" {
                Command::x(q, s)
            } else {
                Command::z(q, s)
            })
        }
        other => op.err(format!("unknown command `{other}`")),
    }
}

fn gate(toks: &[Tok], reg: &BTreeSet<QubitId>) -> Result<Gate> {
    let op = toks[0];
    match op.text {
        "H" => {
            arity(toks, 1, 1)?;
            Ok(Gate::Hadamard(member(&toks[1], reg)?))
        }
        "RZ" => {
            arity(toks, 2, 2)?;
            Ok(Gate::RotZ(member(&toks[1], reg)?, toks[2].angle()?))
        }
        "CZ" => {
            arity(toks, 2, 2)?;
            Ok(Gate::ControlledZ(
                member(&toks[1], reg)?,
                member(&toks[2], reg)?,
            ))
        }
        "FANOUT" => {
            arity(toks, 2, 2)?;
            let o = options(&toks[1..], &["c", "t"])?;
            let (Some(c), Some(t)) = (o[0], o[1]) else {
                return op.err("fan-out needs `c=` and `t=`");
            };
            let targets = t
                .items()
                .iter()
                .map(|x| member(x, reg))
                .collect::<Result<_>>()?;
            Ok(Gate::FanOut {
                control: member(&c, reg)?,
                targets,
            })
        }
        other => op.err(format!("unknown gate `{other}`")),
    }
}

fn scheme_command(toks: &[Tok], reg: &BTreeSet<QubitId>) -> Result<SchemeCommand> {
    let op = toks[0];
    let kind = || -> Result<String> {
        match toks.get(1) {
            Some(t) => Ok(t.text.to_string()),
            None => op.err("missing kind"),
        }
    };
    match op.text {
        "INIT" => {
            arity(toks, 2, 2)?;
            Ok(SchemeCommand::Init {
                kind: kind()?,
                qubit: member(&toks[2], reg)?,
            })
        }
        "U" => {
            arity(toks, 2, 2)?;
            let qubits = toks[2]
                .items()
                .iter()
                .map(|t| member(t, reg))
                .collect::<Result<_>>()?;
            Ok(SchemeCommand::Unitary {
                kind: kind()?,
                qubits,
            })
        }
        "MEAS" => {
            arity(toks, 3, 4)?;
            let qubits = toks[2]
                .items()
                .iter()
                .map(|t| member(t, reg))
                .collect::<Result<_>>()?;
            let o = options(&toks[3..], &["angle", "o"])?;
            let Some(out) = o[1] else {
                return op.err("measurement lacks `o=`");
            };
            Ok(SchemeCommand::Measure {
                kind: kind()?,
                qubits,
                angle: o[0].map_or(Ok(Angle::ZERO), |a| a.angle())?,
                outcome: out.id()?,
            })
        }
        "C" => {
            arity(toks, 3, 3)?;
            let Some(v) = toks[3].value("s") else {
                return toks[3].err("expected `s=`");
            };
            Ok(SchemeCommand::Correct {
                kind: kind()?,
                qubit: member(&toks[2], reg)?,
                signal: v.signal()?,
            })
        }
        other => op.err(format!("unknown command `{other}`")),
    }
}

pub fn parse(text: &str) -> Result<Document> {
    let mut it = lines(text);
    let Some(head) = it.next() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty document".into(),
        });
    };
    let h = header(&head)?;
    match head[0].text {
        "pattern" => {
            let commands = it
                .map(|l| pattern_command(&l, &h.register))
                .collect::<Result<_>>()?;
            Ok(Document::Pattern(Pattern::new(
                h.register, h.inputs, h.outputs, commands,
            )))
        }
        "circuit" => {
            let gates = it.map(|l| gate(&l, &h.register)).collect::<Result<_>>()?;
            Ok(Document::Circuit(Circuit::new(
                h.register, h.inputs, h.outputs, gates,
            )))
        }
        "schemepattern" => {
            let commands = it
                .map(|l| scheme_command(&l, &h.register))
                .collect::<Result<_>>()?;
            let p = SchemePattern::new(h.register, h.inputs, h.outputs, commands);
            Ok(Document::Scheme(h.scheme.expect("checked"), p))
        }
        other => head[0].err(format!("unknown document kind `{other}`")),
    }
}

fn wrong_kind(want: &str) -> Error {
    Error::Parse {
        line: 1,
        column: 1,
        message: format!("expected a {want} document"),
    }
}

pub fn parse_pattern(text: &str) -> Result<Pattern> {
    match parse(text)? {
        Document::Pattern(p) => Ok(p),
        _ => Err(wrong_kind("pattern")),
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    match parse(text)? {
        Document::Circuit(c) => Ok(c),
        _ => Err(wrong_kind("circuit")),
    }
}

pub fn parse_scheme_pattern(text: &str) -> Result<(String, SchemePattern)> {
    match parse(text)? {
        Document::Scheme(s, p) => Ok((s, p)),
        _ => Err(wrong_kind("schemepattern")),
    }
}

fn join(ids: &[QubitId]) -> String {
    ids.iter()
        .map(|q| q.0.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Maximal runs as `a..b`, single ids bare.
fn runs(reg: &BTreeSet<QubitId>) -> String {
    let mut parts = Vec::new();
    let v: Vec<u32> = reg.iter().map(|q| q.0).collect();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[j] + 1 {
            j += 1;
        }
        parts.push(if i == j {
            v[i].to_string()
        } else {
            format!("{}..{}", v[i], v[j])
        });
        i = j + 1;
    }
    parts.join(",")
}

fn signal(s: &Signal) -> String {
    let ids: Vec<QubitId> = s.outcomes().iter().copied().collect();
    format!("{}{}", if s.constant() { "!" } else { "" }, join(&ids))
}

fn head(kind: &str, reg: &BTreeSet<QubitId>, inputs: &[QubitId], outputs: &[QubitId]) -> String {
    format!(
        "{kind} v={} in={} out={}\n",
        runs(reg),
        join(inputs),
        join(outputs)
    )
}

pub fn serialize_pattern(t: &Pattern) -> String {
    let mut s = head("pattern", &t.register, &t.inputs, &t.outputs);
    for c in &t.commands {
        match c {
            Command::Entangle(a, b) => writeln!(s, "E {} {}", a.0, b.0),
            Command::Measure {
                qubit,
                angle,
                s_domain,
                t_domain,
            } => {
                write!(s, "M {} angle={angle}", qubit.0).unwrap();
                if !s_domain.is_trivial() {
                    write!(s, " s={}", signal(s_domain)).unwrap();
                }
                if !t_domain.is_trivial() {
                    write!(s, " t={}", signal(t_domain)).unwrap();
                }
                writeln!(s)
            }
            Command::CorrectX { qubit, signal: g } => writeln!(s, "X {} s={}", qubit.0, signal(g)),
            Command::CorrectZ { qubit, signal: g } => writeln!(s, "Z {} t={}", qubit.0, signal(g)),
        }
        .unwrap();
    }
    s
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut s = head("circuit", &c.register, &c.inputs, &c.outputs);
    for g in &c.gates {
        match g {
            Gate::Hadamard(q) => writeln!(s, "H {}", q.0),
            Gate::RotZ(q, a) => writeln!(s, "RZ {} {a}", q.0),
            Gate::ControlledZ(a, b) => writeln!(s, "CZ {} {}", a.0, b.0),
            Gate::FanOut { control, targets } => {
                writeln!(s, "FANOUT c={} t={}", control.0, join(targets))
            }
        }
        .unwrap();
    }
    s
}

pub fn serialize_scheme_pattern(scheme: &str, p: &SchemePattern) -> String {
    let mut s = format!("schemepattern scheme={scheme} ");
    s.push_str(&head("", &p.register, &p.inputs, &p.outputs)[1..]);
    for c in &p.commands {
        match c {
            SchemeCommand::Init { kind, qubit } => writeln!(s, "INIT {kind} {}", qubit.0),
            SchemeCommand::Unitary { kind, qubits } => writeln!(s, "U {kind} {}", join(qubits)),
            SchemeCommand::Measure {
                kind,
                qubits,
                angle,
                outcome,
            } => {
                write!(s, "MEAS {kind} {}", join(qubits)).unwrap();
                if !angle.is_zero() {
                    write!(s, " angle={angle}").unwrap();
                }
                writeln!(s, " o={}", outcome.0)
            }
            SchemeCommand::Correct {
                kind,
                qubit,
                signal: g,
            } => writeln!(s, "C {kind} {} s={}", qubit.0, signal(g)),
        }
        .unwrap();
    }
    s
}

pub fn serialize(d: &Document) -> String {
    match d {
        Document::Pattern(t) => serialize_pattern(t),
        Document::Circuit(c) => serialize_circuit(c),
        Document::Scheme(name, p) => serialize_scheme_pattern(name, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    const EXAMPLE: &str = "pattern v=1..3 in=1 out=3
E 1 3
E 2 3
E 1 2
M 1 angle=0
X 2 s=1
M 2 angle=1/4pi
X 3 s=1,2
";

    #[test]
    fn example_parses_to_the_rotation_pattern() {
        let t = parse_pattern(EXAMPLE).unwrap();
        assert_eq!(t, Pattern::rotation_example(Angle::pi_fraction(1, 4)));
        assert_eq!(serialize_pattern(&t), EXAMPLE);
    }

    #[test]
    fn empty_body_is_identity() {
        let t = parse_pattern("pattern v=1..1 in=1 out=1\n").unwrap();
        assert_eq!(t, Pattern::identity(&[q(1)]));
    }

    #[test]
    fn angles_round_trip() {
        for a in [
            Angle::ZERO,
            Angle::PI,
            Angle::pi_fraction(3, 8),
            Angle::alpha0_multiple(2),
            Angle::pi_fraction(1, 4) + Angle::alpha0_multiple(-3),
        ] {
            assert_eq!(parse_angle(&a.to_string()), Some(a), "{a}");
        }
        assert_eq!(parse_angle("pi"), Some(Angle::PI));
        assert_eq!(parse_angle("-1/2pi"), Some(Angle::pi_fraction(3, 2)));
        assert_eq!(parse_angle("1/0pi"), None);
        assert_eq!(parse_angle("x"), None);
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse("pattern v=1..2 in=1 out=2\nE 1 2\nM 1 angle=1/4pj\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 3,
                    column: 11,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse("pattern v=1..2 in=1 out=2\nE 1 7\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 5,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse("pattern v=1..2 in=1 out=2\nX 2 s=1,9\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 7,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse("\n# c\n  pattern v=1 in=1\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 3,
                    column: 3,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse("circuit v=1..3 in= out=\nQ 1\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 1,
                    ..
                }
            ),
            "{e}"
        );
        assert!(parse("").is_err());
    }

    #[test]
    fn circuit_and_scheme_round_trip() {
        let c = "circuit v=1..3,7 in=1,2 out=2,7
H 1
RZ 2 -1/8pi
CZ 1 7
FANOUT c=1 t=2,3
";
        let d = parse(c).unwrap();
        // -1/8pi is stored reduced
        assert_eq!(serialize(&d), c.replace("-1/8pi", "15/8pi"));
        let s = "schemepattern scheme=transfer v=1..2 in=1,2 out=2
MEAS Z 2 o=10
MEAS XZ 2,1 o=11
MEAS XY 1 o=1
C X 2 s=!10,11
";
        assert_eq!(serialize(&parse(s).unwrap()), s);
    }

    #[test]
    fn signals_keep_constants() {
        let text = "pattern v=1..2 in=1 out=2\nM 1 angle=1/2pi t=!\nX 2 s=!1\n";
        let t = parse_pattern(text).unwrap();
        assert_eq!(
            t.commands[1],
            Command::x(q(2), Signal::of([q(1)]).with_constant(true))
        );
        assert_eq!(serialize_pattern(&t), text);
    }
}
