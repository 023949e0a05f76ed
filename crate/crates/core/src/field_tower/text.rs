use super::{tower, FieldElement, FieldError, Fe};

/// Renders an element of GF(3^k): prime-field values as digits, everything
/// else as `ζk^e` with `e` the discrete log to the tower generator.
pub fn render_element(a: FieldElement) -> String {
    if a.value.in_prime_field() {
        return a.value.prime_value().to_string();
    }
    let k = a.degree as usize;
    let gf = tower().field(k);
    match gf.log(a.value) {
        Some(1) => format!("ζ{k}"),
        Some(e) => format!("ζ{k}^{e}"),
        None => unreachable!("nonzero element has a log"),
    }
}

/// Parses `ζk^e`, `zk^e`, `ζ^e` (degree `default_degree`), a digit, or a
/// coefficient tuple `[c0,c1,...]` (degree = tuple length).
pub fn parse_element(text: &str, default_degree: usize) -> Result<FieldElement, FieldError> {
    let s = text.trim();
    let err = || FieldError::Parse(text.to_string());
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let coeffs = inner
            .split(',')
            .map(|c| c.trim().parse::<i64>().map(|v| v.rem_euclid(3) as u8))
            .collect::<Result<Vec<u8>, _>>()
            .map_err(|_| err())?;
        let k = coeffs.len();
        let gf = tower().try_field(k)?;
        return Ok(FieldElement::new(k, gf.from_coeffs(&coeffs)));
    }
    let rest = s
        .strip_prefix('ζ')
        .or_else(|| s.strip_prefix('z'))
        .or_else(|| s.strip_prefix("zeta"));
    let Some(rest) = rest else {
        let v: i64 = s.parse().map_err(|_| err())?;
        return Ok(FieldElement::new(default_degree.max(1), Fe::from_i64(v)));
    };
    let (deg_part, exp_part) = match rest.split_once('^') {
        Some((d, e)) => (d, Some(e)),
        None => (rest, None),
    };
    let k = if deg_part.is_empty() {
        default_degree
    } else {
        deg_part.parse::<usize>().map_err(|_| err())?
    };
    let e = match exp_part {
        Some(e) => e.trim_matches(|c| c == '{' || c == '}').parse::<u64>().map_err(|_| err())?,
        None => 1,
    };
    let gf = tower().try_field(k)?;
    Ok(FieldElement::new(k, gf.exp(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_powers_round_trip() {
        let t = tower();
        for k in 1..=6 {
            let gf = t.field(k);
            for a in gf.elements() {
                let fe = FieldElement::new(k, a);
                let text = render_element(fe);
                let back = parse_element(&text, k).unwrap();
                assert_eq!(back.value, a, "{text}");
            }
        }
    }

    #[test]
    fn accepted_spellings() {
        let z = tower().field(2).gen();
        assert_eq!(parse_element("ζ2", 1).unwrap().value, z);
        assert_eq!(parse_element("z2^1", 1).unwrap().value, z);
        assert_eq!(parse_element("ζ^1", 2).unwrap().value, z);
        assert_eq!(parse_element("[0,1]", 1).unwrap(), FieldElement::new(2, z));
        assert_eq!(parse_element("ζ^{4}", 2).unwrap().value, Fe::TWO);
        assert_eq!(parse_element("2", 3).unwrap(), FieldElement::new(3, Fe::TWO));
        assert!(parse_element("ζ11^2", 1).is_err());
        assert!(parse_element("w", 1).is_err());
    }
}
