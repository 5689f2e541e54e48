use std::fmt::Write;

use cwb_core::tm::{MachineBuilder, Move, SpecError};
use cwb_core::MachineSpec;

use super::{content_lines, FormatError};

const HEADERS: [&str; 6] = ["name", "blank", "symbols", "states", "start", "halt"];

/// Parses a machine file.
///
/// ```text
/// name: RIGHT_FOREVER
/// blank: _
/// start: q0
/// halt: h
/// q0 _ -> _ R q0
/// ```
///
/// `symbols:` and `states:` optionally fix the interning order; transitions
/// are `state read -> write move next` with move one of `L`, `R`, `S`.
pub fn parse_machine(src: &str) -> Result<MachineSpec, FormatError> {
    let mut headers: [Option<(usize, &str)>; 6] = Default::default();
    let mut rules = Vec::new();
    for (line, body) in content_lines(src) {
        if let Some((key, value)) = body.split_once(':') {
            let key = key.trim();
            let slot = HEADERS
                .iter()
                .position(|h| *h == key)
                .ok_or_else(|| FormatError::at(line, format!("unknown header `{key}`")))?;
            if headers[slot].is_some() {
                return Err(FormatError::at(line, format!("repeated header `{key}`")));
            }
            headers[slot] = Some((line, value.trim()));
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        match words.as_slice() {
            [q, s, "->", w, m, n] => {
                let mv = single_char(m)
                    .and_then(Move::from_letter)
                    .ok_or_else(|| FormatError::at(line, format!("move `{m}` is not L, R or S")))?;
                rules.push((line, *q, *s, *w, mv, *n));
            }
            _ => return Err(FormatError::at(line, "expected `state symbol -> write move next`")),
        }
    }

    let need = |i: usize| headers[i].ok_or_else(|| FormatError::file(format!("missing header `{}`", HEADERS[i])));
    let (_, name) = need(0)?;
    let (blank_line, blank) = need(1)?;
    let (start_line, start) = need(4)?;
    if blank.split_whitespace().count() != 1 {
        return Err(FormatError::at(blank_line, "blank must be a single symbol"));
    }
    let spec_err = |line: usize| move |e: SpecError| FormatError::at(line, e);

    let mut b = MachineBuilder::new(name, blank);
    if let Some((line, v)) = headers[2] {
        for s in v.split_whitespace() {
            b.symbol(s).map_err(spec_err(line))?;
        }
    }
    if let Some((line, v)) = headers[3] {
        for q in v.split_whitespace() {
            b.state(q).map_err(spec_err(line))?;
        }
    }
    b.start(start).map_err(spec_err(start_line))?;
    let mut halting = Vec::new();
    if let Some((line, v)) = headers[5] {
        for q in v.split_whitespace() {
            b.halt(q).map_err(spec_err(line))?;
            halting.push(q);
        }
    }
    for (line, q, s, w, mv, n) in rules {
        if halting.contains(&q) {
            return Err(FormatError::at(line, SpecError::TransitionFromHalting { state: q.into() }));
        }
        b.rule(q, s, w, mv, n).map_err(spec_err(line))?;
    }
    b.build().map_err(FormatError::file)
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    let c = it.next()?;
    it.next().is_none().then_some(c)
}

/// Writes `spec` in the form [`parse_machine`] reads back to an equal spec.
pub fn render_machine(spec: &MachineSpec) -> String {
    let mut out = String::new();
    let join = |it: &mut dyn Iterator<Item = &str>| it.collect::<Vec<_>>().join(" ");
    writeln!(out, "name: {}", spec.name()).unwrap();
    writeln!(out, "blank: {}", spec.blank_name()).unwrap();
    let symbols = join(&mut spec.symbols().skip(1).map(|(_, n)| n));
    if !symbols.is_empty() {
        writeln!(out, "symbols: {symbols}").unwrap();
    }
    writeln!(out, "states: {}", join(&mut spec.states().map(|(_, n)| n))).unwrap();
    writeln!(out, "start: {}", spec.state_name(spec.start())).unwrap();
    let halt = join(&mut spec.halting_states().map(|q| spec.state_name(q)));
    if !halt.is_empty() {
        writeln!(out, "halt: {halt}").unwrap();
    }
    for (q, s, t) in spec.transitions() {
        writeln!(
            out,
            "{} {} -> {} {} {}",
            spec.state_name(q),
            spec.symbol_name(s),
            spec.symbol_name(t.write),
            t.movement.letter(),
            spec.state_name(t.next)
        )
        .unwrap();
    }
    out
}
