//! Line-oriented scenario files.
//!
//! ```text
//! # Mach-Zehnder with a dud bomb
//! esds 7
//! init A1
//! stage split
//!   map A1 -> (i/r2)*A2 + (-1/r2)*A3
//! stage mirrors
//!   map A2 -> (-1)*A5
//!   map A3 -> (-1)*A4
//! outcome D6 : signal@6
//! ```
//!
//! A term is `amp*monomial`, or a bare monomial with amplitude 1; `VAC`
//! stands for the vacuum itself. Monomials are `A<k>`, `D<k>` and `Z<k>`
//! generators joined by `*`. Predicates are comma-separated `signal@k`,
//! `faulty@k`, `ground@k` and `noothersignal`. `#` starts a comment line.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::amp::{parse_amp_at, Amp};
use crate::labstate::{Condition, Generator, Labstate, Monomial, Projector, StageMap};
use crate::network::Scenario;
use crate::Error;

struct Line<'a> {
    no: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Line<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.no,
            column: self.text[..self.pos.min(self.text.len())].chars().count() + 1,
            message: message.into(),
        }
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.no,
            column: self.text[..pos.min(self.text.len())].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn generator(&mut self, esds: u32) -> Result<Generator, Error> {
        self.skip_ws();
        let start = self.pos;
        let kind = self.peek().ok_or_else(|| self.err("expected generator"))?;
        self.pos += kind.len_utf8();
        let digits: String = self.text[self.pos..]
            .chars()
            .take_while(char::is_ascii_digit)
            .collect();
        if digits.is_empty() || !matches!(kind, 'A' | 'D' | 'Z') {
            return Err(self.err_at(start, "expected generator `A<k>`, `D<k>` or `Z<k>`"));
        }
        self.pos += digits.len();
        let k: u32 = digits
            .parse()
            .map_err(|_| self.err_at(start, "site number too large"))?;
        if k == 0 || k > esds {
            return Err(self.err_at(start, format!("undeclared site {k} (esds {esds})")));
        }
        Ok(match kind {
            'A' => Generator::Create(k),
            'D' => Generator::Decommission(k),
            _ => Generator::Remove(k),
        })
    }

    fn monomial(&mut self, esds: u32) -> Result<Monomial, Error> {
        if self.eat("VAC") {
            return Ok(Monomial::vac());
        }
        let mut gens = vec![self.generator(esds)?];
        while self.eat("*") {
            gens.push(self.generator(esds)?);
        }
        Ok(Monomial(gens))
    }

    fn term(&mut self, esds: u32) -> Result<(Amp, Monomial), Error> {
        self.skip_ws();
        if self.peek() == Some('(') {
            let (amp, end) = parse_amp_at(self.text, self.pos)
                .map_err(|e| self.err_at(e.offset, format!("amplitude: {}", e.message)))?;
            self.pos = end;
            if !self.eat("*") {
                return Err(self.err("expected `*` after amplitude"));
            }
            Ok((amp, self.monomial(esds)?))
        } else {
            Ok((Amp::one(), self.monomial(esds)?))
        }
    }

    fn terms(&mut self, esds: u32) -> Result<Vec<(Amp, Monomial)>, Error> {
        let mut out = Vec::new();
        let mut negate = self.eat("-");
        loop {
            let (a, m) = self.term(esds)?;
            out.push((if negate { -a } else { a }, m));
            if self.eat("+") {
                negate = false;
            } else if self.eat("-") {
                negate = true;
            } else if self.at_end() {
                return Ok(out);
            } else {
                return Err(self.err("expected `+`, `-` or end of line"));
            }
        }
    }

    fn condition(&mut self, esds: u32) -> Result<Condition, Error> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("noothersignal") {
            return Ok(Condition::NoOtherSignal);
        }
        for (kw, ctor) in [
            ("signal@", Condition::Signal as fn(u32) -> Condition),
            ("faulty@", Condition::Faulty),
            ("ground@", Condition::Ground),
        ] {
            if self.eat(kw) {
                let digits: String = self.text[self.pos..]
                    .chars()
                    .take_while(char::is_ascii_digit)
                    .collect();
                self.pos += digits.len();
                let k: u32 = digits
                    .parse()
                    .map_err(|_| self.err("expected site number"))?;
                if k == 0 || k > esds {
                    return Err(self.err_at(start, format!("undeclared site {k} (esds {esds})")));
                }
                return Ok(ctor(k));
            }
        }
        Err(self.err_at(
            start,
            "expected `signal@k`, `faulty@k`, `ground@k` or `noothersignal`",
        ))
    }
}

fn keyword<'a>(text: &'a str, kw: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(kw)?;
    (rest.is_empty() || rest.starts_with(char::is_whitespace)).then_some(rest)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, Error> {
    let mut esds: Option<u32> = None;
    let mut initial: Option<Labstate> = None;
    let mut stages: Vec<(String, StageMap)> = Vec::new();
    let mut outcomes: Vec<(String, Projector)> = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let indent = raw.len() - raw.trim_start().len();
        let body = raw.trim_end();
        let trimmed = body.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut line = Line {
            no: idx + 1,
            text: body,
            pos: indent,
        };
        let need_esds = |line: &Line| esds.ok_or_else(|| line.err("`esds N` must come first"));

        if let Some(rest) = keyword(trimmed, "esds") {
            if esds.is_some() {
                return Err(line.err("`esds` declared twice"));
            }
            let n: u32 = rest
                .trim()
                .parse()
                .map_err(|_| line.err("expected detector count"))?;
            if n == 0 {
                return Err(line.err("need at least one detector"));
            }
            esds = Some(n);
        } else if keyword(trimmed, "init").is_some() {
            let n = need_esds(&line)?;
            if initial.is_some() {
                return Err(line.err("`init` given twice"));
            }
            line.pos += "init".len();
            let terms = line.terms(n)?;
            initial = Some(Labstate::from_terms(1..=n, &terms));
        } else if let Some(rest) = keyword(trimmed, "stage") {
            need_esds(&line)?;
            let name = rest.trim();
            if name.is_empty() {
                return Err(line.err("stage needs a name"));
            }
            stages.push((name.to_string(), StageMap::new()));
        } else if keyword(trimmed, "map").is_some() {
            let n = need_esds(&line)?;
            line.pos += "map".len();
            let src_pos = {
                line.skip_ws();
                line.pos
            };
            let source = line.monomial(n)?;
            let key: BTreeSet<u32> = source
                .creation_sites()
                .ok_or_else(|| line.err_at(src_pos, "rule source must be a product of `A<k>`"))?;
            if key.len() != source.0.len() || key.is_empty() {
                return Err(line.err_at(src_pos, "rule source must list distinct sites"));
            }
            if !line.eat("->") {
                return Err(line.err("expected `->`"));
            }
            let image = line.terms(n)?;
            let (_, map) = stages
                .last_mut()
                .ok_or_else(|| line.err("`map` outside a stage"))?;
            if map.insert_rule(key, image).is_some() {
                return Err(line.err_at(src_pos, format!("duplicate rule for {source}")));
            }
        } else if let Some(rest) = keyword(trimmed, "outcome") {
            let n = need_esds(&line)?;
            let colon = rest
                .find(':')
                .ok_or_else(|| line.err("expected `name : predicate`"))?;
            let name = rest[..colon].trim();
            if name.is_empty() {
                return Err(line.err("outcome needs a name"));
            }
            line.pos = body.len() - rest.len() + colon + 1;
            let mut conds = vec![line.condition(n)?];
            while line.eat(",") {
                conds.push(line.condition(n)?);
            }
            if !line.at_end() {
                return Err(line.err("unexpected input after predicate"));
            }
            outcomes.push((name.to_string(), Projector::new(conds)));
        } else {
            return Err(line.err("expected `esds`, `init`, `stage`, `map` or `outcome`"));
        }
    }

    let esds = esds.ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `esds N`".into(),
    })?;
    let initial = initial.ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `init`".into(),
    })?;
    Ok(Scenario {
        esds,
        initial,
        stages,
        outcomes,
    })
}

fn render_terms(terms: &[(Amp, Monomial)]) -> String {
    terms
        .iter()
        .map(|(a, m)| format!("{a}*{m}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Writes a scenario back out in the file grammar.
pub fn render_scenario(sc: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "esds {}", sc.esds);
    let _ = writeln!(out, "init {}", render_terms(&sc.initial.to_terms()));
    for (name, map) in &sc.stages {
        let _ = writeln!(out, "stage {name}");
        for (key, image) in map.rules() {
            let src: Vec<u32> = key.iter().copied().collect();
            let _ = writeln!(
                out,
                "  map {} -> {}",
                Monomial::create(&src),
                render_terms(image)
            );
        }
    }
    for (name, p) in &sc.outcomes {
        let _ = writeln!(out, "outcome {name} : {p}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    const EV_DUD: &str = "esds 7\ninit A1\nstage s1\n  map A1 -> (i/r2)*A2 + (-1/r2)*A3\n";

    #[test]
    fn beamsplitter_rule() {
        let sc = parse_scenario(EV_DUD).unwrap();
        assert_eq!(sc.stages.len(), 1);
        let (key, image) = sc.stages[0].1.rules().next().unwrap();
        assert_eq!(key, &BTreeSet::from([1]));
        assert_eq!(
            image[0],
            ("(i/r2)".parse().unwrap(), Monomial::create(&[2]))
        );
        assert_eq!(
            image[1],
            ("(-1/r2)".parse().unwrap(), Monomial::create(&[3]))
        );
        assert!(sc.stages[0].1.check_isometry());
    }

    #[test]
    fn annihilation_rule() {
        let sc =
            parse_scenario("esds 4\ninit A3*A4\nstage vertex\n  map A3*A4 -> (1)*D3*D4\n").unwrap();
        let (key, image) = sc.stages[0].1.rules().next().unwrap();
        assert_eq!(key, &BTreeSet::from([3, 4]));
        assert_eq!(
            image[0].1,
            Monomial(vec![Generator::Decommission(3), Generator::Decommission(4)])
        );
        let run = sc.run(None).unwrap();
        assert_eq!(run.final_state().to_string(), "(1)*D3*D4");
    }

    #[test]
    fn no_stages_keeps_initial_state() {
        let sc = parse_scenario("esds 2\ninit A1\n").unwrap();
        let run = sc.run(None).unwrap();
        assert_eq!(run.states.len(), 1);
        assert_eq!(
            run.final_state(),
            &Labstate::vacuum(1..=2).apply_creation(1)
        );
    }

    #[test]
    fn crlf_and_comments() {
        let sc = parse_scenario(
            "# hi\r\nesds 2\r\n\r\ninit (1)*VAC\r\noutcome none : ground@1, ground@2\r\n",
        )
        .unwrap();
        let run = sc.run(None).unwrap();
        assert_eq!(run.probability("none"), Some(&Rat::one()));
    }

    fn parse_err(src: &str) -> (usize, usize, String) {
        match parse_scenario(src) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => (line, column, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn error_positions() {
        let (line, col, msg) = parse_err("esds 3\ninit A1\nstage s\n  map A1 -> (1)*A9\n");
        assert_eq!((line, col), (4, 17));
        assert!(msg.contains("undeclared site 9"), "{msg}");

        let (line, _, msg) =
            parse_err("esds 3\ninit A1\nstage s\n  map A1 -> A2\n  map A1 -> A3\n");
        assert_eq!(line, 5);
        assert!(msg.contains("duplicate rule"), "{msg}");

        let (line, col, _) = parse_err("esds 3\ninit (1/0)*A1\n");
        assert_eq!((line, col), (2, 9));

        let (line, _, _) = parse_err("init A1\n");
        assert_eq!(line, 1);
        let (line, _, _) = parse_err("esds 3\nfrobnicate\n");
        assert_eq!(line, 2);
        let (_, _, msg) = parse_err("esds 3\ninit A1\n  map A1 -> A2\n");
        assert!(msg.contains("outside a stage"));
        let (_, _, msg) = parse_err("esds 3\ninit A1\nstage s\n  map D1 -> A2\n");
        assert!(msg.contains("product of `A<k>`"));
        let (_, _, msg) = parse_err("esds 3\ninit A1\noutcome x : signal@1, bogus\n");
        assert!(msg.contains("expected `signal@k`"));
    }

    #[test]
    fn negative_term_separator() {
        let sc = parse_scenario("esds 3\ninit A1\nstage s\n  map A1 -> (i/r2)*A2 - (1/r2)*A3\n")
            .unwrap();
        let (_, image) = sc.stages[0].1.rules().next().unwrap();
        assert_eq!(image[1].0, "(-1/r2)".parse::<Amp>().unwrap());
    }
}
