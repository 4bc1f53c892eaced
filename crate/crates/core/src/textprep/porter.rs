//! Porter stemming algorithm (the original 1980 formulation).
//!
//! Only lowercase alphabetic tokens are stemmed. Capitalized tokens pass
//! through unchanged: the pipeline preserves case, and entity names like
//! "Apple" must survive intact for downstream matching.

/// Stems a single token. Non-alphabetic or capitalized input is returned
/// unchanged.
pub fn stem(token: &str) -> String {
    if token.len() < 3
        || !token.bytes().all(|b| b.is_ascii_alphabetic())
        || token.as_bytes()[0].is_ascii_uppercase()
    {
        return token.to_string();
    }
    let mut w: Vec<u8> = token.bytes().map(|b| b.to_ascii_lowercase()).collect();
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5a(&mut w);
    step5b(&mut w);
    String::from_utf8(w).expect("ascii")
}

fn is_cons(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_cons(w, i - 1),
        _ => true,
    }
}

/// Number of vowel-consonant sequences ("measure" m) in the stem.
fn measure(w: &[u8]) -> usize {
    let n = w.len();
    let mut i = 0;
    let mut m = 0;
    while i < n && is_cons(w, i) {
        i += 1;
    }
    loop {
        if i >= n {
            return m;
        }
        while i < n && !is_cons(w, i) {
            i += 1;
        }
        if i >= n {
            return m;
        }
        while i < n && is_cons(w, i) {
            i += 1;
        }
        m += 1;
    }
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_cons(w, i))
}

fn ends_double_cons(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_cons(w, n - 1)
}

/// *o: stem ends consonant-vowel-consonant where the final consonant is not
/// w, x, or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_cons(w, n - 3)
        && !is_cons(w, n - 2)
        && is_cons(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn ends_with(w: &[u8], suffix: &str) -> bool {
    w.len() >= suffix.len() && &w[w.len() - suffix.len()..] == suffix.as_bytes()
}

fn replace(w: &mut Vec<u8>, suffix: &str, with: &str) {
    let keep = w.len() - suffix.len();
    w.truncate(keep);
    w.extend_from_slice(with.as_bytes());
}

fn step1a(w: &mut Vec<u8>) {
    if ends_with(w, "sses") {
        replace(w, "sses", "ss");
    } else if ends_with(w, "ies") {
        replace(w, "ies", "i");
    } else if !ends_with(w, "ss") && ends_with(w, "s") {
        replace(w, "s", "");
    }
}

fn step1b(w: &mut Vec<u8>) {
    if ends_with(w, "eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            replace(w, "eed", "ee");
        }
        return;
    }
    let removed = if ends_with(w, "ed") && has_vowel(&w[..w.len() - 2]) {
        replace(w, "ed", "");
        true
    } else if ends_with(w, "ing") && has_vowel(&w[..w.len() - 3]) {
        replace(w, "ing", "");
        true
    } else {
        false
    };
    if !removed {
        return;
    }
    if ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz") {
        w.push(b'e');
    } else if ends_double_cons(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
        w.pop();
    } else if measure(w) == 1 && ends_cvc(w) {
        w.push(b'e');
    }
}

fn step1c(w: &mut Vec<u8>) {
    if ends_with(w, "y") && has_vowel(&w[..w.len() - 1]) {
        let n = w.len();
        w[n - 1] = b'i';
    }
}

/// Applies the longest matching suffix rule whose stem condition holds;
/// within a step at most one rule fires.
fn apply_rules(w: &mut Vec<u8>, min_measure: usize, rules: &[(&str, &str)]) {
    let longest = rules
        .iter()
        .filter(|(suf, _)| ends_with(w, suf))
        .max_by_key(|(suf, _)| suf.len());
    if let Some(&(suf, with)) = longest {
        if measure(&w[..w.len() - suf.len()]) >= min_measure {
            replace(w, suf, with);
        }
    }
}

fn step2(w: &mut Vec<u8>) {
    apply_rules(
        w,
        1,
        &[
            ("ational", "ate"),
            ("tional", "tion"),
            ("enci", "ence"),
            ("anci", "ance"),
            ("izer", "ize"),
            ("abli", "able"),
            ("alli", "al"),
            ("entli", "ent"),
            ("eli", "e"),
            ("ousli", "ous"),
            ("ization", "ize"),
            ("ation", "ate"),
            ("ator", "ate"),
            ("alism", "al"),
            ("iveness", "ive"),
            ("fulness", "ful"),
            ("ousness", "ous"),
            ("aliti", "al"),
            ("iviti", "ive"),
            ("biliti", "ble"),
        ],
    );
}

fn step3(w: &mut Vec<u8>) {
    apply_rules(
        w,
        1,
        &[
            ("icate", "ic"),
            ("ative", ""),
            ("alize", "al"),
            ("iciti", "ic"),
            ("ical", "ic"),
            ("ful", ""),
            ("ness", ""),
        ],
    );
}

fn step4(w: &mut Vec<u8>) {
    let suffixes = [
        "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion", "ism", "ate",
        "iti", "ous", "ive", "ize", "al", "er", "ic", "ou",
    ];
    let longest = suffixes
        .iter()
        .filter(|suf| ends_with(w, suf))
        .max_by_key(|suf| suf.len());
    if let Some(&suf) = longest {
        let stem = &w[..w.len() - suf.len()];
        if measure(stem) > 1 {
            if suf == "ion" && !matches!(stem.last(), Some(b's') | Some(b't')) {
                return;
            }
            replace(w, suf, "");
        }
    }
}

fn step5a(w: &mut Vec<u8>) {
    if !ends_with(w, "e") {
        return;
    }
    let stem = &w[..w.len() - 1];
    let m = measure(stem);
    if m > 1 || (m == 1 && !ends_cvc(stem)) {
        w.pop();
    }
}

fn step5b(w: &mut Vec<u8>) {
    if measure(w) > 1 && ends_double_cons(w) && w[w.len() - 1] == b'l' {
        w.pop();
    }
}
