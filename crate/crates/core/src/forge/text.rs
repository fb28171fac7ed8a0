//! Small English-rendering helpers shared by the instruction builders.

/// Integers bare; other reals with four significant digits and trailing
/// zeros trimmed. Digits left of the decimal point are never rounded away.
pub fn format_number(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// "a" or "an" for the word that follows, by leading sound.
///
/// Acronym-like words (a letter followed by an uppercase letter or digit,
/// such as "nRing" or "SAs") are read letter by letter.
pub fn article(word: &str) -> &'static str {
    let mut chars = word.chars();
    let Some(first) = chars.next() else {
        return "a";
    };
    let second = chars.next();
    let spelled = matches!(second, Some(c) if c.is_ascii_uppercase() || c.is_ascii_digit())
        || (first.is_ascii_uppercase() && second.is_none());
    if spelled {
        return if "AEFHILMNORSXaefhilmnorsx".contains(first) {
            "an"
        } else {
            "a"
        };
    }
    if first.is_ascii_digit() {
        return if matches!(first, '8') || word.starts_with("11") || word.starts_with("18") {
            "an"
        } else {
            "a"
        };
    }
    let lower = word.to_ascii_lowercase();
    if ["uni", "use", "usu", "one", "eu"]
        .iter()
        .any(|p| lower.starts_with(p))
    {
        return "a";
    }
    if ["hour", "honest", "honor"]
        .iter()
        .any(|p| lower.starts_with(p))
    {
        return "an";
    }
    if "aeiou".contains(lower.chars().next().unwrap_or('x')) {
        "an"
    } else {
        "a"
    }
}

/// Joins clauses as "x", "x and y", or "x, y, and z".
pub fn join_clauses(items: &[String]) -> String {
    match items.len() {
        0 => String::new(),
        1 => items[0].clone(),
        2 => format!("{} and {}", items[0], items[1]),
        n => format!("{}, and {}", items[..n - 1].join(", "), items[n - 1]),
    }
}

/// Uppercases the first character.
pub fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(format_number(12.0), "12");
        assert_eq!(format_number(1.2), "1.2");
        assert_eq!(format_number(3.1), "3.1");
        assert_eq!(format_number(1.23456), "1.235");
        assert_eq!(format_number(0.000123456), "0.0001235");
        assert_eq!(format_number(-2.50), "-2.5");
        assert_eq!(format_number(12345.67), "12346");
        assert_eq!(format_number(-0.00001), "-0.00001");
    }

    #[test]
    fn articles() {
        assert_eq!(article("toxicity"), "a");
        assert_eq!(article("activity"), "an");
        assert_eq!(article("Logp"), "a");
        assert_eq!(article("LogP"), "a");
        assert_eq!(article("nRing"), "an");
        assert_eq!(article("SAs"), "an");
        assert_eq!(article("QED"), "a");
        assert_eq!(article("MaxRing"), "a");
        assert_eq!(article("fChar"), "an");
        assert_eq!(article("unique"), "a");
        assert_eq!(article("hour"), "an");
    }

    #[test]
    fn joins() {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(join_clauses(&v(&["a"])), "a");
        assert_eq!(join_clauses(&v(&["a", "b"])), "a and b");
        assert_eq!(join_clauses(&v(&["a", "b", "c"])), "a, b, and c");
        assert_eq!(capitalize("the drug"), "The drug");
    }
}
