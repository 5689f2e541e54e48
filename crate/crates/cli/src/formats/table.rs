use cwb_core::godel::Alphabet;
use cwb_core::universe::{InputEncoding, PropertyTable, ValueRule};
use cwb_core::GodelNumber;
use num_bigint::BigUint;

use super::{content_lines, parse_machine, FormatError};

/// Reads the text of a machine file named in a table.
pub trait TableSource {
    fn machine_text(&mut self, path: &str) -> Result<String, String>;
}

impl<F: FnMut(&str) -> Result<String, String>> TableSource for F {
    fn machine_text(&mut self, path: &str) -> Result<String, String> {
        self(path)
    }
}

/// Parses a property table:
///
/// ```text
/// alphabet: abcdefghijklmnopqrstuvwxyz
/// property mass machine const3.tm
/// property spin machine parity.tm time
/// property charge const 7
/// property phase affine 2 1
/// property colour cycle 1,4,2
/// property noise lcg 5 3 17 1
/// ```
///
/// Rules: `const m`; `affine a b` is `a·t + b`; `cycle v0,v1,…` is
/// `v[t mod len]`; `lcg a c n x0` is the `t`-th iterate of
/// `x ↦ (a·x + c) mod n` from `x0`; `machine <path> [time|property-time]`
/// runs a machine file on `unary(t)` or `unary(k) _ unary(t)`.
pub fn parse_table(src: &str, mut source: impl TableSource) -> Result<PropertyTable, FormatError> {
    let mut table: Option<PropertyTable> = None;
    for (line, body) in content_lines(src) {
        if let Some(chars) = body.strip_prefix("alphabet:") {
            if table.is_some() {
                return Err(FormatError::at(line, "repeated header `alphabet`"));
            }
            table = Some(PropertyTable::new(Alphabet::new(chars.trim()).map_err(|e| FormatError::at(line, e))?));
            continue;
        }
        let t = table.as_mut().ok_or_else(|| FormatError::at(line, "`alphabet:` must come first"))?;
        let words: Vec<&str> = body.split_whitespace().collect();
        let ["property", name, kind, rest @ ..] = words.as_slice() else {
            return Err(FormatError::at(line, "expected `property <name> <rule> …`"));
        };
        let rule = parse_rule(kind, rest, &mut source).map_err(|m| FormatError::at(line, m))?;
        t.insert(name, rule).map_err(|e| FormatError::at(line, e))?;
    }
    table.ok_or_else(|| FormatError::file("missing header `alphabet`"))
}

fn nat(w: &str) -> Result<u64, String> {
    w.parse().map_err(|_| format!("`{w}` is not a natural number"))
}

fn parse_rule(kind: &str, args: &[&str], source: &mut impl TableSource) -> Result<ValueRule, String> {
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("rule `{kind}` takes {n} arguments"))
        }
    };
    let value = |v: BigUint| GodelNumber(v);
    Ok(match kind {
        "const" => {
            arity(1)?;
            let m = BigUint::from(nat(args[0])?);
            ValueRule::closed_form(move |_, _| value(m.clone()))
        }
        "affine" => {
            arity(2)?;
            let (a, b) = (BigUint::from(nat(args[0])?), BigUint::from(nat(args[1])?));
            ValueRule::closed_form(move |_, t| value(&a * t + &b))
        }
        "cycle" => {
            arity(1)?;
            let vs = args[0].split(',').map(nat).collect::<Result<Vec<_>, _>>()?;
            ValueRule::closed_form(move |_, t| value(BigUint::from(vs[(t % vs.len() as u64) as usize])))
        }
        "lcg" => {
            arity(4)?;
            let [a, c, n, x0] = [nat(args[0])?, nat(args[1])?, nat(args[2])?, nat(args[3])?];
            if n == 0 {
                return Err("lcg modulus must be positive".into());
            }
            ValueRule::closed_form(move |_, t| {
                let x = (0..t).fold(x0 % n, |x, _| ((a as u128 * x as u128 + c as u128) % n as u128) as u64);
                value(BigUint::from(x))
            })
        }
        "machine" => {
            let encoding = match args {
                [_] | [_, "time"] => InputEncoding::Time,
                [_, "property-time"] => InputEncoding::PropertyAndTime,
                _ => return Err("expected `machine <path> [time|property-time]`".into()),
            };
            let text = source.machine_text(args[0])?;
            let spec = parse_machine(&text).map_err(|e| format!("{}: {e}", args[0]))?;
            ValueRule::Machine { spec, encoding }
        }
        _ => return Err(format!("unknown rule `{kind}`")),
    })
}
