use super::InstructionRecord;

/// Human-readable card: `[Prompt]` (or `[Context]` for queries),
/// `[Question]` and `[Answer]` sections separated by blank lines. Empty
/// answers are omitted.
pub fn render_card(record: &InstructionRecord) -> String {
    let mut sections = Vec::with_capacity(3);
    if let Some(ctx) = &record.context {
        let label = if record.task.is_query() {
            "[Context]"
        } else {
            "[Prompt]"
        };
        sections.push(format!("{label} {ctx}"));
    }
    sections.push(format!("[Question] {}", record.question));
    if !record.answer.is_empty() {
        sections.push(format!("[Answer] {}", record.answer));
    }
    let mut out = sections.join("\n\n");
    out.push('\n');
    out
}
