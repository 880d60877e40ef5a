//! Conversation-log ingestion and utterance extraction.
//!
//! Input is the spreadsheet export of the tutoring system's conversation
//! table: one CSV row per student/assistant message pair. Only the student
//! side feeds the models; assistant messages stay on the raw rows for
//! provenance.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact header names expected in the conversation export (matched
/// case-insensitively).
pub const CONVERSATION_COLUMNS: [&str; 6] = [
    "Conversation ID",
    "Case",
    "Jailbreak ID",
    "Conversation Pair",
    "User Message",
    "Assistant Message",
];

/// The phrase list stripped from the front of student messages. The export
/// contains scripted conversation starters that carry no signal.
pub const DEFAULT_BOOTSTRAP_PHRASES: [&str; 1] = ["please start the conversation"];

/// One row of the conversation export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversationRow {
    pub conversation_id: String,
    pub case_id: String,
    pub jailbreak_id: Option<String>,
    pub pair_index: u64,
    pub user_message: String,
    pub assistant_message: String,
}

/// A cleaned student message with its provenance identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    /// `<conversation_id>#<pair_index>`.
    pub utterance_id: String,
    pub text: String,
    pub case_id: String,
}

impl Utterance {
    pub fn id_for(conversation_id: &str, pair_index: u64) -> String {
        format!("{conversation_id}#{pair_index}")
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("malformed row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

fn malformed(row: usize, reason: impl Into<String>) -> CorpusError {
    CorpusError::MalformedRow {
        row,
        reason: reason.into(),
    }
}

/// Read conversation rows from CSV bytes.
///
/// Headers are matched case-insensitively; extra columns are ignored. Row
/// order is preserved. Within a conversation the pair index must be
/// strictly increasing, which also rules out duplicate pairs.
pub fn ingest_conversations<R: Read>(source: R) -> Result<Vec<ConversationRow>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();

    let mut column_ix = [0usize; 6];
    for (slot, wanted) in column_ix.iter_mut().zip(CONVERSATION_COLUMNS) {
        let found = headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(wanted))
            .ok_or_else(|| CorpusError::MissingColumn(wanted.to_string()))?;
        *slot = found;
    }

    let mut rows = Vec::new();
    let mut last_pair: std::collections::HashMap<String, u64> = std::collections::HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let row_no = i + 1; // 1-based data row
        let record = record?;
        let field = |col: usize| record.get(column_ix[col]).unwrap_or("").to_string();

        let conversation_id = field(0).trim().to_string();
        if conversation_id.is_empty() {
            return Err(malformed(row_no, "empty Conversation ID"));
        }
        let pair_raw = field(3);
        let pair_index: u64 = pair_raw
            .trim()
            .parse()
            .map_err(|_| malformed(row_no, format!("Conversation Pair {pair_raw:?} is not a positive integer")))?;
        if pair_index == 0 {
            return Err(malformed(row_no, "Conversation Pair must be >= 1"));
        }
        if let Some(&prev) = last_pair.get(&conversation_id) {
            if pair_index <= prev {
                return Err(malformed(
                    row_no,
                    format!(
                        "Conversation Pair {pair_index} does not increase within conversation {conversation_id:?} (previous {prev})"
                    ),
                ));
            }
        }
        last_pair.insert(conversation_id.clone(), pair_index);

        let jailbreak = field(2).trim().to_string();
        rows.push(ConversationRow {
            conversation_id,
            case_id: field(1).trim().to_string(),
            jailbreak_id: if jailbreak.is_empty() { None } else { Some(jailbreak) },
            pair_index,
            user_message: field(4),
            assistant_message: field(5),
        });
    }
    Ok(rows)
}

/// Trim a raw student message and strip leading bootstrap phrases.
/// Returns `None` when nothing is left.
pub fn clean_utterance(text: &str, bootstrap_phrases: &[String]) -> Option<String> {
    let mut current = text.trim().to_string();
    loop {
        let mut stripped = false;
        for phrase in bootstrap_phrases {
            let lower = current.to_lowercase();
            if lower.starts_with(&phrase.to_lowercase()) {
                current = current[phrase.len()..].trim_start().to_string();
                stripped = true;
            }
        }
        if !stripped {
            break;
        }
    }
    let cleaned = current.trim().to_string();
    if cleaned.is_empty() {
        None
    } else {
        Some(cleaned)
    }
}

/// Extract the modeling corpus: one utterance per row whose cleaned student
/// message is non-empty. Assistant messages are dropped from the output.
pub fn extract_utterances(
    rows: &[ConversationRow],
    bootstrap_phrases: &[String],
) -> Result<Vec<Utterance>, CorpusError> {
    let mut seen = std::collections::HashSet::new();
    let mut utterances = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let utterance_id = Utterance::id_for(&row.conversation_id, row.pair_index);
        if !seen.insert(utterance_id.clone()) {
            return Err(malformed(
                i + 1,
                format!("duplicate utterance id {utterance_id:?}"),
            ));
        }
        if let Some(text) = clean_utterance(&row.user_message, bootstrap_phrases) {
            utterances.push(Utterance {
                utterance_id,
                text,
                case_id: row.case_id.clone(),
            });
        }
    }
    Ok(utterances)
}

pub fn default_bootstrap_phrases() -> Vec<String> {
    DEFAULT_BOOTSTRAP_PHRASES
        .iter()
        .map(|s| s.to_string())
        .collect()
}
