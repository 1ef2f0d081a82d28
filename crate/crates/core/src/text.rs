//! Tokenization shared by the classifier, the gazetteer and keyword extraction.
//!
//! A token is a maximal run of letters, digits and apostrophes. Whitespace and
//! hyphens separate tokens; every other character is dropped. Tokens are
//! lowercased.

/// One token together with the character range (Unicode scalar offsets) it
/// was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSpan {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_apostrophe(c)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_separator(c: char) -> bool {
    c.is_whitespace() || c == '-'
}

/// Lowercases, splits on whitespace and hyphens, and strips characters that
/// are not letters, digits or apostrophes. Empty pieces are dropped.
pub fn tokenize(surface: &str) -> Vec<String> {
    surface
        .split(is_separator)
        .map(|piece| {
            piece
                .chars()
                .filter(|&c| is_word_char(c))
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

/// Splits running text into word tokens with character offsets.
///
/// Unlike [`tokenize`], characters outside the word class end a token rather
/// than being skipped, so `"interview."` yields the span of `interview` only.
/// The offsets always slice the original text.
pub fn token_spans(text: &str) -> Vec<TokenSpan> {
    let mut spans = Vec::new();
    let mut current: Option<(usize, String)> = None;
    let mut offset = 0;
    for c in text.chars() {
        if is_word_char(c) {
            let (_, buf) = current.get_or_insert_with(|| (offset, String::new()));
            buf.extend(c.to_lowercase());
        } else if let Some((start, buf)) = current.take() {
            spans.push(TokenSpan {
                text: buf,
                start,
                end: offset,
            });
        }
        offset += 1;
    }
    if let Some((start, buf)) = current {
        spans.push(TokenSpan {
            text: buf,
            start,
            end: offset,
        });
    }
    spans
}

/// Returns `true` when the characters between two tokens consist only of
/// token separators (whitespace or hyphens), so the tokens may be read as one
/// phrase.
pub(crate) fn joined_by_separators(chars: &[char], left_end: usize, right_start: usize) -> bool {
    right_start > left_end
        && chars[left_end..right_start]
            .iter()
            .all(|&c| is_separator(c))
}

/// Slice a string by character offsets.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut indices = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()));
    let byte_start = indices.nth(start)?;
    let byte_end = if end == start {
        byte_start
    } else {
        indices.nth(end - start - 1)?
    };
    Some(&text[byte_start..byte_end])
}
