//! Edit distance and the suggestion threshold.

/// Unit-cost Levenshtein distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let above = row[j + 1];
            let cost = usize::from(ca != cb);
            row[j + 1] = (diag + cost).min(above + 1).min(row[j] + 1);
            diag = above;
        }
    }
    row[b.len()]
}

/// Largest distance accepted for a suggestion replacing `name`:
/// at most 2, and at most a third of the name (rounded up).
pub fn max_accepted(name: &str) -> usize {
    name.chars().count().div_ceil(3).min(2)
}

pub fn accepts(name: &str, distance: usize) -> bool {
    distance <= max_accepted(name)
}

/// Looser bound for local identifiers: a third of the name, uncapped.
/// Scopes hold few names, so a wider radius stays unambiguous.
pub fn max_accepted_identifier(name: &str) -> usize {
    name.chars().count().div_ceil(3)
}

/// Candidate nearest to `name` within the threshold. Ties go to the
/// lexicographically smallest candidate.
pub fn closest<'a, I>(name: &str, candidates: I) -> Option<(String, usize)>
where
    I: IntoIterator<Item = &'a str>,
{
    closest_within(name, candidates, max_accepted(name))
}

pub fn closest_within<'a, I>(name: &str, candidates: I, limit: usize) -> Option<(String, usize)>
where
    I: IntoIterator<Item = &'a str>,
{
    let len = name.chars().count();
    let mut best: Option<(&str, usize)> = None;
    for cand in candidates {
        // Length difference is a lower bound on the distance.
        if cand.chars().count().abs_diff(len) > limit {
            continue;
        }
        let d = levenshtein(name, cand);
        if d > limit {
            continue;
        }
        best = match best {
            Some((b, bd)) if bd < d || (bd == d && b <= cand) => Some((b, bd)),
            _ => Some((cand, d)),
        };
    }
    best.map(|(c, d)| (c.to_string(), d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("read_exel", "read_excel"), 1);
        assert_eq!(levenshtein("arrya", "array"), 2);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("same", "same"), 0);
    }

    #[test]
    fn threshold() {
        assert_eq!(max_accepted(""), 0);
        assert_eq!(max_accepted("ab"), 1);
        assert_eq!(max_accepted("abc"), 1);
        assert_eq!(max_accepted("abcd"), 2);
        assert_eq!(max_accepted("read_exel"), 2);
        assert!(accepts("arrya", 2));
        assert!(!accepts("arr", 2));
    }

    #[test]
    fn closest_breaks_ties_lexicographically() {
        assert_eq!(closest("cat", ["hat", "bat", "car"]), Some(("bat".into(), 1)));
        assert_eq!(closest("zzqq", ["read_csv", "concat"]), None);
        assert_eq!(closest("max_len_len_str", ["max_len_str", "x"]), None);
        let limit = max_accepted_identifier("max_len_len_str");
        assert_eq!(closest_within("max_len_len_str", ["max_len_str", "x"], limit), Some(("max_len_str".into(), 4)));
    }
}
