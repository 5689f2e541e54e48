use num_bigint::BigUint;

use super::{content_lines, FormatError};

/// Decimal naturals separated by whitespace or commas, in file order.
pub fn parse_sequence(src: &str) -> Result<Vec<BigUint>, FormatError> {
    let mut out = Vec::new();
    for (line, body) in content_lines(src) {
        for word in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()) {
            let v = BigUint::parse_bytes(word.as_bytes(), 10)
                .ok_or_else(|| FormatError::at(line, format!("`{word}` is not a natural number")))?;
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        let v = parse_sequence("# seq\n3, 1\n4 1 5\n").unwrap();
        assert_eq!(v, [3u32, 1, 4, 1, 5].map(BigUint::from));
        assert_eq!(parse_sequence("1\n2\nx\n").unwrap_err().line, Some(3));
        assert_eq!(parse_sequence("-1").unwrap_err().line, Some(1));
        assert!(parse_sequence("").unwrap().is_empty());
    }
}
