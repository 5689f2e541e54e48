use std::fmt::Write;

use cwb_core::universe::{MeasurementLog, Provenance, Record};
use cwb_core::GodelNumber;
use num_bigint::BigUint;

use super::FormatError;

/// Parses a measurement log:
///
/// ```text
/// # particle=p1 property=2
/// 0	3
/// 1	5
/// ```
///
/// The header must be the first non-blank line; later `#` lines are
/// comments. Records are `t<TAB>m` and must be strictly chronological.
#[allow(clippy::tabs_in_doc_comments)]
pub fn parse_log(src: &str) -> Result<MeasurementLog, FormatError> {
    let mut header: Option<(String, GodelNumber)> = None;
    let mut records = Vec::new();
    let mut last_line = 0;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(body).ok_or_else(|| {
                FormatError::at(line, "expected header `# particle=<id> property=<k>`")
            })?);
            continue;
        }
        if body.starts_with('#') {
            continue;
        }
        let mut fields = body.split('\t').map(str::trim);
        let (Some(t), Some(m), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(FormatError::at(line, "expected `t<TAB>m`"));
        };
        let t: u64 = t.parse().map_err(|_| FormatError::at(line, format!("`{t}` is not a time index")))?;
        let m = BigUint::parse_bytes(m.as_bytes(), 10)
            .ok_or_else(|| FormatError::at(line, format!("`{m}` is not a natural number")))?;
        if records.last().is_some_and(|r: &Record| r.t >= t) {
            return Err(FormatError::at(line, format!("t = {t} is not after the previous record")));
        }
        records.push(Record { t, m });
        last_line = line;
    }
    let (particle, property) = header.ok_or_else(|| FormatError::file("empty log"))?;
    MeasurementLog::new(&particle, property, records, Provenance::Measured).map_err(|e| FormatError::at(last_line, e))
}

fn parse_header(body: &str) -> Option<(String, GodelNumber)> {
    let rest = body.strip_prefix('#')?;
    let mut particle = None;
    let mut property = None;
    for word in rest.split_whitespace() {
        match word.split_once('=')? {
            ("particle", v) if !v.is_empty() => particle = Some(v.to_string()),
            ("property", v) => property = Some(v.parse::<GodelNumber>().ok()?),
            _ => return None,
        }
    }
    Some((particle?, property?))
}

pub fn render_log(log: &MeasurementLog) -> String {
    let mut out = format!("# particle={} property={}\n", log.particle, log.property);
    for r in log.records() {
        writeln!(out, "{}\t{}", r.t, r.m).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let src = "# particle=p1 property=12\n0\t3\n# note\n2\t5\n";
        let log = parse_log(src).unwrap();
        assert_eq!(log.particle, "p1");
        assert_eq!(log.property, GodelNumber::from(12u64));
        assert_eq!(log.values(), [3u32, 5].map(BigUint::from));
        assert_eq!(render_log(&log), "# particle=p1 property=12\n0\t3\n2\t5\n");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_log("0\t3\n").unwrap_err().line, Some(1));
        assert_eq!(parse_log("# particle=p property=2\n0\t3\n0\t4\n").unwrap_err().line, Some(3));
        assert_eq!(parse_log("# particle=p property=2\n0 3\n").unwrap_err().line, Some(2));
        assert_eq!(parse_log("# particle=p property=2\n\n0\tx\n").unwrap_err().line, Some(3));
        assert_eq!(parse_log("").unwrap_err().line, None);
    }
}
