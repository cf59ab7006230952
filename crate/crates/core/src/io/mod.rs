//! Text formats: knowledge bases, tables, example labels, hypotheses and
//! cross-validation reports.

mod examples;
mod hypothesis;
mod kb_text;
mod report;
mod syntax;
mod table;

use thiserror::Error;

use crate::kb::KbError;

pub use examples::{parse_examples, serialize_examples};
pub use hypothesis::{parse_hypothesis, serialize_hypothesis};
pub use kb_text::{parse_kb, serialize_kb};
pub use report::{report_kv, report_table};
pub use syntax::parse_concept;
pub use table::{convert_table, ConvertedTable, CLASS_CONCEPT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Kb { line: usize, source: KbError },
    #[error("malformed table: {0}")]
    Table(String),
    #[error("the dataset has no rows")]
    EmptyDataset,
    #[error("column `{column}` mixes value types (offending value `{value}`)")]
    TypeInconsistency { column: String, value: String },
}
