use std::collections::BTreeMap;

use crate::model::TestCase;
use crate::syntax::TokenKind;

/// Term-frequency vector of one case body.
pub type TermVector = BTreeMap<String, u32>;

/// Splits an identifier on underscores and case changes, lowercasing the
/// parts: `parseHTTPHeader_twice` gives `parse`, `http`, `header`, `twice`.
pub fn split_identifier(ident: &str) -> Vec<String> {
    let mut parts = Vec::new();
    for chunk in ident.trim_start_matches('@').split('_').filter(|c| !c.is_empty()) {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        for i in 1..chars.len() {
            let (prev, cur) = (chars[i - 1], chars[i]);
            let next_lower = chars.get(i + 1).is_some_and(|c| c.is_lowercase());
            let boundary = (prev.is_lowercase() || prev.is_ascii_digit()) && cur.is_uppercase()
                || prev.is_uppercase() && cur.is_uppercase() && next_lower;
            if boundary {
                parts.push(chars[start..i].iter().collect::<String>().to_lowercase());
                start = i;
            }
        }
        parts.push(chars[start..].iter().collect::<String>().to_lowercase());
    }
    parts
}

fn literal_term(text: &str) -> String {
    let t = text.trim_start_matches(['@', '$']);
    let t = t.strip_suffix("u8").unwrap_or(t);
    t.trim_matches(['"', '\'']).to_lowercase()
}

/// Term-frequency vector of a case body. Punctuation is dropped.
pub fn case_terms(case: &TestCase) -> TermVector {
    let mut terms = TermVector::new();
    let Some(body) = &case.body else {
        return terms;
    };
    let text = body.tree().source().text();
    for token in body.tokens() {
        let raw = &text[token.span.clone()];
        let words = match token.kind {
            TokenKind::Identifier => split_identifier(raw),
            TokenKind::Keyword => vec![raw.to_string()],
            TokenKind::NumericLiteral => vec![raw.to_lowercase()],
            TokenKind::StringLiteral | TokenKind::InterpolatedString | TokenKind::CharLiteral => {
                vec![literal_term(raw)]
            }
            TokenKind::Punct | TokenKind::Unknown => continue,
        };
        for w in words.into_iter().filter(|w| !w.is_empty()) {
            *terms.entry(w).or_default() += 1;
        }
    }
    terms
}

/// Cosine similarity clamped to [0, 1]. Two empty vectors are identical;
/// an empty and a non-empty one share nothing.
pub fn cosine_similarity(a: &TermVector, b: &TermVector) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let dot: f64 = a
        .iter()
        .filter_map(|(k, x)| b.get(k).map(|y| f64::from(*x) * f64::from(*y)))
        .sum();
    let norm = |v: &TermVector| v.values().map(|x| f64::from(*x).powi(2)).sum::<f64>().sqrt();
    (dot / (norm(a) * norm(b))).clamp(0.0, 1.0)
}

/// Mean cosine similarity over all unordered pairs; 1.0 when there are no pairs.
pub fn mean_pairwise_similarity(vectors: &[TermVector]) -> f64 {
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            sum += cosine_similarity(a, b);
            pairs += 1;
        }
    }
    if pairs == 0 {
        1.0
    } else {
        sum / pairs as f64
    }
}
