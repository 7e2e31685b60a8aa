//! HOA v1 export and import for state-based Büchi automata.
//!
//! Export writes explicit labeled edges. Edges leaving an accepting state
//! carry the mark `{0}`; an accepting state without outgoing edges carries the
//! mark on its `State:` line instead. Import accepts either placement, which
//! covers the subset of HOA this crate emits plus hand-written files using
//! `Acceptance: 1 Inf(0)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{BuchiAutomaton, BuchiError, Cube, Edge, Guard};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn label(guard: &Guard, ap_index: &BTreeMap<&str, usize>) -> String {
    if guard.is_true() {
        return "t".into();
    }
    if guard.is_false() {
        return "f".into();
    }
    guard
        .cubes()
        .iter()
        .map(|cube| {
            cube.iter()
                .map(|(p, &pos)| format!("{}{}", if pos { "" } else { "!" }, ap_index[p.as_str()]))
                .collect::<Vec<_>>()
                .join("&")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Serializes `b` as HOA v1 text.
pub fn export_hoa(b: &BuchiAutomaton) -> String {
    let aps: Vec<&str> = b.alphabet().iter().map(String::as_str).collect();
    let ap_index: BTreeMap<&str, usize> = aps.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut out = String::new();
    writeln!(out, "HOA: v1").unwrap();
    writeln!(out, "States: {}", b.num_states()).unwrap();
    writeln!(out, "Start: {}", b.initial()).unwrap();
    write!(out, "AP: {}", aps.len()).unwrap();
    for p in &aps {
        write!(out, " {}", quote(p)).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "acc-name: Buchi").unwrap();
    writeln!(out, "Acceptance: 1 Inf(0)").unwrap();
    writeln!(out, "properties: trans-labels explicit-labels state-acc").unwrap();
    writeln!(out, "--BODY--").unwrap();
    for s in b.states() {
        let acc = b.is_accepting(s);
        let edges = b.edges(s);
        write!(out, "State: {} {}", s, quote(b.name(s))).unwrap();
        if acc && edges.is_empty() {
            write!(out, " {{0}}").unwrap();
        }
        writeln!(out).unwrap();
        for e in edges {
            write!(out, "[{}] {}", label(&e.guard, &ap_index), e.target).unwrap();
            if acc {
                write!(out, " {{0}}").unwrap();
            }
            writeln!(out).unwrap();
        }
    }
    writeln!(out, "--END--").unwrap();
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Int(usize),
    Str(String),
    Sym(char),
    Body,
    End,
}

fn lex(text: &str) -> Result<Vec<Tok>, BuchiError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |msg: String| BuchiError::Hoa(msg);
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            let close = (i + 2..chars.len().saturating_sub(1))
                .find(|&j| chars[j] == '*' && chars[j + 1] == '/')
                .ok_or_else(|| err("unterminated comment".into()))?;
            i = close + 2;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(err("unterminated string".into())),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        s.push(*chars.get(i + 1).ok_or_else(|| err("bad escape".into()))?);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            toks.push(Tok::Str(s));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push(Tok::Int(s.parse().map_err(|_| err(format!("bad integer {s}")))?));
        } else if c == '-' && chars[i..].starts_with(&['-', '-']) {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            match s.as_str() {
                "--BODY--" => toks.push(Tok::Body),
                "--END--" => toks.push(Tok::End),
                _ => return Err(err(format!("unexpected token {s}"))),
            }
        } else if c.is_ascii_alphabetic() || c == '_' || c == '@' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '-' | '.' | '@'))
            {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if chars.get(i) == Some(&':') {
                i += 1;
                toks.push(Tok::Header(s));
            } else {
                toks.push(Tok::Ident(s));
            }
        } else if "[]{}()!&|".contains(c) {
            toks.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(toks)
}

struct Reader {
    toks: Vec<Tok>,
    pos: usize,
}

impl Reader {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, BuchiError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| BuchiError::Hoa("unexpected end of input".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn int(&mut self) -> Result<usize, BuchiError> {
        match self.next()? {
            Tok::Int(n) => Ok(n),
            t => Err(BuchiError::Hoa(format!("expected integer, found {t:?}"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), BuchiError> {
        match self.next()? {
            Tok::Sym(d) if d == c => Ok(()),
            t => Err(BuchiError::Hoa(format!("expected `{c}`, found {t:?}"))),
        }
    }

    fn marks(&mut self) -> Result<BTreeSet<usize>, BuchiError> {
        let mut set = BTreeSet::new();
        if self.peek() == Some(&Tok::Sym('{')) {
            self.next()?;
            loop {
                match self.next()? {
                    Tok::Int(n) => {
                        set.insert(n);
                    }
                    Tok::Sym('}') => break,
                    t => return Err(BuchiError::Hoa(format!("bad acceptance mark {t:?}"))),
                }
            }
        }
        Ok(set)
    }

    fn label_or(&mut self, aps: &[String]) -> Result<Guard, BuchiError> {
        let mut g = self.label_and(aps)?;
        while self.peek() == Some(&Tok::Sym('|')) {
            self.next()?;
            g = g.or(&self.label_and(aps)?);
        }
        Ok(g)
    }

    fn label_and(&mut self, aps: &[String]) -> Result<Guard, BuchiError> {
        let mut g = self.label_not(aps)?;
        while self.peek() == Some(&Tok::Sym('&')) {
            self.next()?;
            g = g.and(&self.label_not(aps)?);
        }
        Ok(g)
    }

    fn label_not(&mut self, aps: &[String]) -> Result<Guard, BuchiError> {
        match self.next()? {
            Tok::Sym('!') => Ok(self.label_not(aps)?.not()),
            Tok::Sym('(') => {
                let g = self.label_or(aps)?;
                self.sym(')')?;
                Ok(g)
            }
            Tok::Ident(s) if s == "t" => Ok(Guard::top()),
            Tok::Ident(s) if s == "f" => Ok(Guard::bottom()),
            Tok::Int(n) => {
                let name = aps
                    .get(n)
                    .ok_or_else(|| BuchiError::Hoa(format!("AP index {n} out of range")))?;
                Ok(Guard::from_cube(Cube::from([(name.clone(), true)])))
            }
            t => Err(BuchiError::Hoa(format!("bad label token {t:?}"))),
        }
    }
}

/// Parses HOA v1 text with Büchi acceptance (`Acceptance: 1 Inf(0)`).
pub fn import_hoa(text: &str) -> Result<BuchiAutomaton, BuchiError> {
    let mut r = Reader {
        toks: lex(text)?,
        pos: 0,
    };
    let mut num_states = None;
    let mut start = None;
    let mut aps: Vec<String> = Vec::new();
    let mut saw_version = false;
    let mut saw_acceptance = false;

    loop {
        match r.next()? {
            Tok::Body => break,
            Tok::Header(h) => {
                let mut values = Vec::new();
                while !matches!(r.peek(), Some(Tok::Header(_)) | Some(Tok::Body) | None) {
                    values.push(r.next()?);
                }
                match h.as_str() {
                    "HOA" => {
                        if values != [Tok::Ident("v1".into())] {
                            return Err(BuchiError::Hoa(format!("unsupported version {values:?}")));
                        }
                        saw_version = true;
                    }
                    "States" => match values.as_slice() {
                        [Tok::Int(n)] => num_states = Some(*n),
                        _ => return Err(BuchiError::Hoa("bad States header".into())),
                    },
                    "Start" => match values.as_slice() {
                        [Tok::Int(n)] if start.is_none() => start = Some(*n),
                        _ => {
                            return Err(BuchiError::Hoa(
                                "exactly one single-state Start header is supported".into(),
                            ))
                        }
                    },
                    "AP" => {
                        let mut it = values.into_iter();
                        let count = match it.next() {
                            Some(Tok::Int(n)) => n,
                            _ => return Err(BuchiError::Hoa("bad AP header".into())),
                        };
                        for v in it {
                            match v {
                                Tok::Str(s) => aps.push(s),
                                _ => return Err(BuchiError::Hoa("bad AP name".into())),
                            }
                        }
                        if aps.len() != count {
                            return Err(BuchiError::Hoa("AP count mismatch".into()));
                        }
                    }
                    "Acceptance" => {
                        let expected = [
                            Tok::Int(1),
                            Tok::Ident("Inf".into()),
                            Tok::Sym('('),
                            Tok::Int(0),
                            Tok::Sym(')'),
                        ];
                        if values != expected {
                            return Err(BuchiError::Hoa(
                                "only `Acceptance: 1 Inf(0)` is supported".into(),
                            ));
                        }
                        saw_acceptance = true;
                    }
                    _ => {}
                }
            }
            t => return Err(BuchiError::Hoa(format!("unexpected {t:?} in header"))),
        }
    }
    if !saw_version {
        return Err(BuchiError::Hoa("missing `HOA: v1`".into()));
    }
    if !saw_acceptance {
        return Err(BuchiError::Hoa("missing Acceptance header".into()));
    }
    let n = num_states.ok_or_else(|| BuchiError::Hoa("missing States header".into()))?;
    let initial = start.ok_or_else(|| BuchiError::Hoa("missing Start header".into()))?;

    let mut names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let mut accepting = BTreeSet::new();
    loop {
        match r.next()? {
            Tok::End => break,
            Tok::Header(h) if h == "State" => {
                let s = r.int()?;
                if s >= n {
                    return Err(BuchiError::UnknownState(s));
                }
                if let Some(Tok::Str(_)) = r.peek() {
                    if let Tok::Str(name) = r.next()? {
                        names[s] = name;
                    }
                }
                let state_marks = r.marks()?;
                let mut edge_marks = Vec::new();
                while r.peek() == Some(&Tok::Sym('[')) {
                    r.next()?;
                    let guard = r.label_or(&aps)?;
                    r.sym(']')?;
                    let target = r.int()?;
                    edge_marks.push(r.marks()?.contains(&0));
                    edges[s].push(Edge { guard, target });
                }
                let marked = state_marks.contains(&0)
                    || (!edge_marks.is_empty() && edge_marks.iter().all(|&m| m));
                if !state_marks.contains(&0) && edge_marks.iter().any(|&m| m) && !marked {
                    return Err(BuchiError::Hoa(format!(
                        "state {s} mixes marked and unmarked edges"
                    )));
                }
                if marked {
                    accepting.insert(s);
                }
            }
            t => return Err(BuchiError::Hoa(format!("unexpected {t:?} in body"))),
        }
    }
    BuchiAutomaton::new(aps.into_iter().collect(), names, initial, accepting, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buchi::translate;
    use crate::ltl::{parse_ltl, Formula};

    #[test]
    fn universal_automaton_text() {
        let text = export_hoa(&translate(&Formula::True));
        assert!(text.contains("States: 1\n"));
        assert!(text.contains("Acceptance: 1 Inf(0)\n"));
        assert!(text.contains("\n[t] 0 {0}\n"));
        assert!(text.starts_with("HOA: v1\n"));
        assert!(text.ends_with("--END--\n"));
    }

    #[test]
    fn round_trip_preserves_structure() {
        let b = translate(&parse_ltl("G (a -> F b) & (c U !a)").unwrap());
        let back = import_hoa(&export_hoa(&b)).unwrap();
        assert_eq!(back.alphabet(), b.alphabet());
        assert_eq!(back.num_states(), b.num_states());
        assert_eq!(back.initial(), b.initial());
        assert_eq!(back.accepting(), b.accepting());
        for s in b.states() {
            assert_eq!(back.name(s), b.name(s));
            assert_eq!(back.edges(s).len(), b.edges(s).len());
            for (x, y) in back.edges(s).iter().zip(b.edges(s)) {
                assert_eq!(x.target, y.target);
                assert!(x.guard.equivalent(&y.guard));
            }
        }
    }

    #[test]
    fn parses_hand_written_labels() {
        let text = r#"HOA: v1
States: 2
Start: 0
AP: 2 "a" "b"
acc-name: Buchi
Acceptance: 1 Inf(0)
--BODY--
State: 0
[!0 | (0 & !1)] 0
[0&1] 1
State: 1 {0}
[t] 1
--END--"#;
        let b = import_hoa(text).unwrap();
        assert_eq!(b.num_states(), 2);
        assert!(b.is_accepting(1));
        assert!(!b.is_accepting(0));
        assert!(b.edges(0)[0].guard.equivalent(&Guard::literal("a", false).or(&Guard::literal("b", false))));
    }

    #[test]
    fn rejects_other_acceptance_conditions() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 0\nAcceptance: 2 Inf(0) & Inf(1)\n--BODY--\nState: 0\n[t] 0\n--END--";
        assert!(matches!(import_hoa(text), Err(BuchiError::Hoa(_))));
    }
}
