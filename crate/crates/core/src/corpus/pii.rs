use std::sync::OnceLock;

use regex::Regex;

/// Replacement for every redacted span.
pub const REDACTED: &str = "[REDACTED]";

fn email_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"[A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,}").expect("email regex")
    })
}

// Seven or more digits, optionally led by '+', with single separators
// (space, '.', '-', or parentheses) between digits.
fn phone_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\+?\(?\d(?:(?:[ .\-]|\) ?|\()?\d){6,}").expect("phone regex")
    })
}

/// Removes emails, phone numbers and configured names from free text.
///
/// Names come from an explicit list and match whole words, case-insensitively.
#[derive(Debug, Clone, Default)]
pub struct PiiScrubber {
    names: Option<Regex>,
}

impl PiiScrubber {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a name list. Blank entries are ignored.
    pub fn with_names<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut names: Vec<String> = names
            .into_iter()
            .map(|s| s.as_ref().trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        // longest first so "Anna Maria" wins over "Anna"
        names.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        names.dedup();
        self.names = if names.is_empty() {
            None
        } else {
            let alt = names
                .iter()
                .map(|n| regex::escape(n))
                .collect::<Vec<_>>()
                .join("|");
            Some(Regex::new(&format!(r"(?i)\b(?:{alt})\b")).expect("escaped name regex"))
        };
        self
    }

    /// Returns the scrubbed text and the number of replacements made.
    pub fn scrub(&self, text: &str) -> (String, usize) {
        let mut count = 0;
        let (t, n) = replace_all(email_re(), text, |_, _| true);
        count += n;
        let (t, n) = replace_all(phone_re(), &t, standalone);
        count += n;
        let t = match &self.names {
            Some(re) => {
                let (t, n) = replace_all(re, &t, |_, _| true);
                count += n;
                t
            }
            None => t,
        };
        (t, count)
    }

    /// Number of spans in `text` that any detection pattern still matches.
    pub fn residual_matches(&self, text: &str) -> usize {
        let emails = email_re().find_iter(text).count();
        let phones = phone_re()
            .find_iter(text)
            .filter(|m| standalone(text, m))
            .count();
        let names = self.names.as_ref().map_or(0, |re| re.find_iter(text).count());
        emails + phones + names
    }
}

/// Scrubs with the default configuration (no name list).
pub fn scrub_pii(text: &str) -> (String, usize) {
    PiiScrubber::default().scrub(text)
}

// A digit run glued to letters ("ABC1234567") is an identifier, not a phone.
fn standalone(text: &str, m: &regex::Match<'_>) -> bool {
    let before = text[..m.start()].chars().next_back();
    let after = text[m.end()..].chars().next();
    !before.is_some_and(|c| c.is_alphanumeric()) && !after.is_some_and(|c| c.is_alphanumeric())
}

fn replace_all(
    re: &Regex,
    text: &str,
    accept: impl Fn(&str, &regex::Match<'_>) -> bool,
) -> (String, usize) {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    let mut n = 0;
    for m in re.find_iter(text) {
        if !accept(text, &m) {
            continue;
        }
        out.push_str(&text[last..m.start()]);
        out.push_str(REDACTED);
        last = m.end();
        n += 1;
    }
    out.push_str(&text[last..]);
    (out, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn email_and_phone() {
        let (t, n) = scrub_pii("contact a@b.com or +1-555-123-4567");
        assert_eq!(t, "contact [REDACTED] or [REDACTED]");
        assert_eq!(n, 2);
    }

    #[test]
    fn short_digit_runs_survive() {
        let (t, n) = scrub_pii("Skilled in Python3");
        assert_eq!(t, "Skilled in Python3");
        assert_eq!(n, 0);
        let (t, _) = scrub_pii("Worked 2015 - 2019, ref ABC1234567");
        assert_eq!(t, "Worked 2015 - 2019, ref ABC1234567");
    }

    #[test]
    fn phone_shapes() {
        for p in ["(555) 123-4567", "555.123.4567", "+44 20 7946 0958", "5551234567"] {
            let (t, n) = scrub_pii(&format!("call {p} now"));
            assert_eq!((t.as_str(), n), ("call [REDACTED] now", 1), "{p}");
        }
    }

    #[test]
    fn names_from_list() {
        let s = PiiScrubber::new().with_names(["Jane Doe", "Jane", ""]);
        let (t, n) = s.scrub("JANE DOE met jane; Janet stayed");
        assert_eq!(t, "[REDACTED] met [REDACTED]; Janet stayed");
        assert_eq!(n, 2);
    }

    #[test]
    fn empty_passes_through() {
        assert_eq!(scrub_pii(""), (String::new(), 0));
    }

    proptest! {
        #[test]
        fn idempotent(text in "[a-zA-Z0-9@.+\\-() ]{0,80}") {
            let s = PiiScrubber::new().with_names(["Bob"]);
            let (once, _) = s.scrub(&text);
            let (twice, n) = s.scrub(&once);
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(n, 0);
            prop_assert_eq!(s.residual_matches(&once), 0);
        }
    }
}
