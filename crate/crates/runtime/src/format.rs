//! Structural checks on the final morphology answer.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

/// Required opening of the first paragraph.
pub const SHORT_TERM_PREFIX: &str = "In the short term,";
/// Required opening of the second paragraph.
pub const LONG_TERM_PREFIX: &str = "In the long term,";
/// The answer must stay under this many whitespace-delimited words.
pub const WORD_LIMIT: usize = 300;

const SENTENCES_MIN: usize = 3;
const SENTENCES_MAX: usize = 5;

/// Content warnings that do not fail the verdict: the answer should avoid
/// numerals and timestamps, but enforcement is left to the judges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenContentFlags {
    pub digits: bool,
    pub timestamps: bool,
}

/// Outcome of [`validate_final_format`]. `pass` covers the structural
/// checks only: paragraph count, prefixes, word limit, sentence counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatReport {
    pub paragraph_count: usize,
    pub prefixes_ok: bool,
    pub word_count: usize,
    pub sentence_counts: Vec<usize>,
    pub forbidden_content: ForbiddenContentFlags,
    pub pass: bool,
    pub reasons: Vec<String>,
}

/// Checks a final answer against the output requirements: exactly two
/// blank-line-separated paragraphs opening with the fixed prefixes, under
/// 300 words total, 3 to 5 sentences per paragraph. Digits and ISO-like
/// timestamps are flagged but never fail the report.
///
/// Sentence boundary: `.`, `!`, or `?` followed by whitespace or the end of
/// the paragraph. This miscounts abbreviations; it is a deliberate
/// approximation.
pub fn validate_final_format(text: &str) -> FormatReport {
    let paragraphs = split_paragraphs(text);
    let paragraph_count = paragraphs.len();
    let word_count = text.split_whitespace().count();
    let sentence_counts: Vec<usize> = paragraphs.iter().map(|p| count_sentences(p)).collect();

    let mut reasons = Vec::new();
    if paragraph_count != 2 {
        reasons.push(format!(
            "expected exactly 2 paragraphs separated by a blank line, found {paragraph_count}"
        ));
    }
    let mut prefixes_ok = paragraph_count == 2;
    if paragraph_count == 2 {
        if !paragraphs[0].starts_with(SHORT_TERM_PREFIX) {
            prefixes_ok = false;
            reasons.push(format!(
                "paragraph 1 must begin with \"{SHORT_TERM_PREFIX}\""
            ));
        }
        if !paragraphs[1].starts_with(LONG_TERM_PREFIX) {
            prefixes_ok = false;
            reasons.push(format!(
                "paragraph 2 must begin with \"{LONG_TERM_PREFIX}\""
            ));
        }
    }
    if word_count >= WORD_LIMIT {
        reasons.push(format!(
            "answer has {word_count} words, must stay under {WORD_LIMIT}"
        ));
    }
    for (index, count) in sentence_counts.iter().enumerate() {
        if !(SENTENCES_MIN..=SENTENCES_MAX).contains(count) {
            reasons.push(format!(
                "paragraph {} has {} sentences, expected {}-{}",
                index + 1,
                count,
                SENTENCES_MIN,
                SENTENCES_MAX
            ));
        }
    }

    FormatReport {
        paragraph_count,
        prefixes_ok,
        word_count,
        sentence_counts,
        forbidden_content: ForbiddenContentFlags {
            digits: text.chars().any(|c| c.is_ascii_digit()),
            timestamps: timestamp_pattern().is_match(text),
        },
        pass: reasons.is_empty(),
        reasons,
    }
}

fn split_paragraphs(text: &str) -> Vec<String> {
    let mut paragraphs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                paragraphs.push(current.join("\n").trim().to_string());
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current.join("\n").trim().to_string());
    }
    paragraphs
}

fn count_sentences(paragraph: &str) -> usize {
    let chars: Vec<char> = paragraph.chars().collect();
    let mut count = 0;
    for (i, c) in chars.iter().enumerate() {
        if matches!(c, '.' | '!' | '?') {
            let boundary = match chars.get(i + 1) {
                None => true,
                Some(next) => next.is_whitespace(),
            };
            if boundary {
                count += 1;
            }
        }
    }
    count
}

fn timestamp_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"\d{4}-\d{2}-\d{2}|\b\d{1,2}:\d{2}\b").expect("timestamp pattern compiles")
    })
}
