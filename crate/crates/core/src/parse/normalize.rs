/// Lowercase, strip punctuation, and expand `100m`-style numbers.
///
/// Hyphens survive only between alphanumerics, decimal points only between
/// digits, and thousands separators inside numbers are dropped.
pub fn normalize_query(raw: &str) -> String {
    let lower: Vec<char> = raw
        .to_lowercase()
        .chars()
        .filter(|c| !matches!(c, '\'' | '\u{2019}' | '\u{2018}'))
        .collect();
    let mut cleaned = String::with_capacity(lower.len());
    for (i, &c) in lower.iter().enumerate() {
        let prev = if i > 0 { lower.get(i - 1).copied() } else { None };
        let next = lower.get(i + 1).copied();
        let keep = if c.is_alphanumeric() {
            true
        } else if c == '.' {
            prev.is_some_and(|p| p.is_ascii_digit()) && next.is_some_and(|n| n.is_ascii_digit())
        } else if c == '-' {
            prev.is_some_and(char::is_alphanumeric) && next.is_some_and(char::is_alphanumeric)
        } else if c == ',' && prev.is_some_and(|p| p.is_ascii_digit()) && is_thousands_group(&lower[i + 1..]) {
            continue;
        } else {
            false
        };
        cleaned.push(if keep { c } else { ' ' });
    }
    cleaned
        .split_whitespace()
        .map(expand_number)
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_thousands_group(rest: &[char]) -> bool {
    rest.len() >= 3
        && rest[..3].iter().all(char::is_ascii_digit)
        && rest.get(3).is_none_or(|c| !c.is_ascii_digit())
}

fn expand_number(token: &str) -> String {
    let Some(last) = token.chars().last() else {
        return String::new();
    };
    let mult = match last {
        'k' => 1e3,
        'm' => 1e6,
        'b' => 1e9,
        _ => return token.to_string(),
    };
    let num = &token[..token.len() - 1];
    let well_formed = match num.split_once('.') {
        Some((int, frac)) => {
            !int.is_empty()
                && !frac.is_empty()
                && int.bytes().all(|b| b.is_ascii_digit())
                && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => !num.is_empty() && num.bytes().all(|b| b.is_ascii_digit()),
    };
    if !well_formed {
        return token.to_string();
    }
    let value: f64 = match num.parse() {
        Ok(v) => v,
        Err(_) => return token.to_string(),
    };
    format_number(value * mult)
}

/// Plain decimal rendering with no exponent and no trailing zeros.
pub fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e18 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn examples() {
        assert_eq!(normalize_query("grossed over 100M"), "grossed over 100000000");
        assert_eq!(normalize_query("2.5k units"), "2500 units");
        assert_eq!(normalize_query("Show budget!"), "show budget");
        assert_eq!(normalize_query("PG-13 movies"), "pg-13 movies");
        assert_eq!(normalize_query("a - b"), "a b");
        assert_eq!(normalize_query("rating above 7.5."), "rating above 7.5");
        assert_eq!(normalize_query("Tomatoes' score"), "tomatoes score");
        assert_eq!(normalize_query("over $1,200,000"), "over 1200000");
        assert_eq!(normalize_query("1.5b and 3bm"), "1500000000 and 3bm");
    }

    proptest! {
        #[test]
        fn idempotent(q in "\\PC{0,40}") {
            let once = normalize_query(&q);
            prop_assert_eq!(normalize_query(&once), once.clone());
        }

        #[test]
        fn idempotent_numeric(q in "([0-9]{1,4}(\\.[0-9]{1,3})?[kmb]?|[a-z]{1,5}|[,.$ -]){0,12}") {
            let once = normalize_query(&q);
            prop_assert_eq!(normalize_query(&once), once.clone());
        }
    }
}
