use super::{CorpusError, DocChunk};
use crate::instruct::estimate_tokens;

/// Byte ranges of `text` ending after each run of blank-line separators.
fn paragraph_ranges(text: &str, start: usize, end: usize) -> Vec<(usize, usize)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut piece = start;
    let mut i = start;
    while i + 1 < end {
        if bytes[i] == b'\n' && bytes[i + 1] == b'\n' {
            let mut j = i + 2;
            while j < end && matches!(bytes[j], b'\n' | b'\r') {
                j += 1;
            }
            out.push((piece, j));
            piece = j;
            i = j;
        } else {
            i += 1;
        }
    }
    if piece < end {
        out.push((piece, end));
    }
    out
}

/// Byte ranges ending after sentence punctuation and the whitespace that follows it.
fn sentence_ranges(text: &str, start: usize, end: usize) -> Vec<(usize, usize)> {
    let slice = &text[start..end];
    let mut out = Vec::new();
    let mut piece = start;
    let mut chars = slice.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') && chars.peek().is_some_and(|&(_, n)| n.is_whitespace()) {
            let mut stop = start + i + c.len_utf8();
            while let Some(&(j, n)) = chars.peek() {
                if !n.is_whitespace() {
                    break;
                }
                stop = start + j + n.len_utf8();
                chars.next();
            }
            out.push((piece, stop));
            piece = stop;
        }
    }
    if piece < end {
        out.push((piece, end));
    }
    out
}

/// Byte ranges of at most `max_chars` characters each.
fn char_ranges(text: &str, start: usize, end: usize, max_chars: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut piece = start;
    for (n, (i, _)) in text[start..end].char_indices().enumerate() {
        if n > 0 && n % max_chars == 0 {
            out.push((piece, start + i));
            piece = start + i;
        }
    }
    out.push((piece, end));
    out
}

/// Paragraphs, with oversized ones split into sentences and oversized
/// sentences into fixed character runs, so every piece fits `budget` tokens.
fn pieces(text: &str, budget: usize) -> Vec<(usize, usize)> {
    let fits = |(a, b): (usize, usize)| estimate_tokens(&text[a..b]) <= budget;
    let mut out = Vec::new();
    for p in paragraph_ranges(text, 0, text.len()) {
        if fits(p) {
            out.push(p);
            continue;
        }
        for s in sentence_ranges(text, p.0, p.1) {
            if fits(s) {
                out.push(s);
            } else {
                out.extend(char_ranges(text, s.0, s.1, budget * 4));
            }
        }
    }
    out
}

/// Start of the overlap carried into a chunk whose new content begins at
/// `start`: at most `overlap` tokens back, moved forward to a word start
/// when the window contains whitespace.
fn overlap_start(text: &str, start: usize, overlap: usize) -> usize {
    if overlap == 0 {
        return start;
    }
    let window_chars = overlap * 4;
    let back = text[..start]
        .char_indices()
        .rev()
        .take(window_chars)
        .last()
        .map_or(start, |(i, _)| i);
    match text[back..start].find(char::is_whitespace) {
        Some(ws) => {
            let after = &text[back + ws..start];
            let skip = after.len() - after.trim_start().len();
            let s = back + ws + skip;
            if s < start {
                s
            } else {
                back
            }
        }
        None => back,
    }
}

/// Splits `text` into chunks of at most `max_tokens` estimated tokens.
///
/// Pieces are packed greedily in order. Each chunk after the first starts
/// with up to `overlap` tokens copied from the text just before it, and
/// records their length in `overlap_bytes`.
pub fn segment(
    doc_id: &str,
    text: &str,
    max_tokens: usize,
    overlap: usize,
) -> Result<Vec<DocChunk>, CorpusError> {
    if max_tokens <= overlap {
        return Err(CorpusError::InvalidBudget {
            max_tokens,
            overlap,
        });
    }
    let mut chunks = Vec::new();
    let mut emit = |from: usize, body: usize, to: usize| {
        let t = &text[from..to];
        chunks.push(DocChunk {
            doc_id: doc_id.into(),
            chunk_index: chunks.len(),
            text: t.into(),
            token_estimate: estimate_tokens(t),
            overlap_bytes: body - from,
        });
    };
    let (mut from, mut body, mut to) = (0, 0, 0);
    for (_, end) in pieces(text, max_tokens - overlap) {
        if to > body && estimate_tokens(&text[from..end]) > max_tokens {
            emit(from, body, to);
            body = to;
            from = overlap_start(text, body, overlap);
        }
        to = end;
    }
    if to > body {
        emit(from, body, to);
    }
    Ok(chunks)
}

/// Concatenates chunks with their overlaps removed.
pub fn reassemble(chunks: &[DocChunk]) -> String {
    chunks.iter().map(|c| &c.text[c.overlap_bytes..]).collect()
}
