use crate::corpus::{slice, tokenize};

/// A lexicon entry tokenized like review text. Entries written with a leading
/// `=` match case-sensitively; all others ignore case.
#[derive(Debug, Clone, PartialEq)]
struct Entry {
    tokens: Vec<String>,
    case_sensitive: bool,
    display: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompiledLexicon {
    entries: Vec<Entry>,
}

/// Tokens of a text in both original and lowercased form.
pub(crate) struct TokenizedText {
    pub original: Vec<String>,
    pub lower: Vec<String>,
}

impl TokenizedText {
    pub fn new(text: &str) -> Self {
        let original: Vec<String> = tokenize(text).into_iter().map(|s| slice(text, s)).collect();
        let lower = original.iter().map(|t| t.to_lowercase()).collect();
        TokenizedText { original, lower }
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }
}

impl CompiledLexicon {
    pub fn new<S: AsRef<str>>(terms: &[S]) -> Self {
        let mut entries: Vec<Entry> = terms
            .iter()
            .filter_map(|term| {
                let term = term.as_ref();
                let (case_sensitive, body) = match term.strip_prefix('=') {
                    Some(rest) => (true, rest),
                    None => (false, term),
                };
                let tokens: Vec<String> = tokenize(body)
                    .into_iter()
                    .map(|s| slice(body, s))
                    .map(|t| if case_sensitive { t } else { t.to_lowercase() })
                    .collect();
                (!tokens.is_empty()).then(|| Entry { tokens, case_sensitive, display: body.to_string() })
            })
            .collect();
        // longest entries win at a given position
        entries.sort_by_key(|e| std::cmp::Reverse(e.tokens.len()));
        CompiledLexicon { entries }
    }

    fn matches_at(&self, text: &TokenizedText, pos: usize) -> Option<&Entry> {
        self.entries.iter().find(|e| {
            let source = if e.case_sensitive { &text.original } else { &text.lower };
            source.len() >= pos + e.tokens.len() && source[pos..pos + e.tokens.len()] == e.tokens[..]
        })
    }

    /// Non-overlapping left-to-right matches; returns the matched entries.
    pub(crate) fn find_all(&self, text: &TokenizedText) -> Vec<String> {
        let mut hits = Vec::new();
        let mut pos = 0;
        while pos < text.len() {
            match self.matches_at(text, pos) {
                Some(e) => {
                    hits.push(e.display.clone());
                    pos += e.tokens.len();
                }
                None => pos += 1,
            }
        }
        hits
    }

    pub(crate) fn count(&self, text: &TokenizedText) -> usize {
        self.find_all(text).len()
    }

    /// Token index of the leftmost match.
    pub(crate) fn first_match_start(&self, text: &TokenizedText) -> Option<usize> {
        (0..text.len()).find(|&pos| self.matches_at(text, pos).is_some())
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.display.as_str())
    }
}
