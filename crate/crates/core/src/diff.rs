use crate::record::{ChangeType, FileModification};

/// Render a commit's modifications as one flat diff text.
///
/// Each modification contributes a one-line header describing the change
/// followed by its diff body; sections are joined with single newlines. This
/// is the canonical textual form of a commit's source side, used by
/// tokenization, retrieval, and model input construction, so its exact
/// layout is load-bearing.
pub fn render_diff(mods: &[FileModification]) -> String {
    let mut sections = Vec::with_capacity(mods.len());
    for m in mods {
        let header = mod_header(m);
        if m.diff.is_empty() {
            sections.push(header);
        } else {
            sections.push(format!("{header}\n{}", m.diff));
        }
    }
    sections.join("\n")
}

fn mod_header(m: &FileModification) -> String {
    let old = m.old_path.as_deref().unwrap_or("");
    let new = m.new_path.as_deref().unwrap_or("");
    match m.change_type {
        ChangeType::Modify => format!("modify {new}"),
        ChangeType::Add => format!("new file {new}"),
        ChangeType::Delete => format!("deleted file {old}"),
        ChangeType::Rename => format!("rename {old} to {new}"),
        ChangeType::Copy => format!("copy {old} to {new}"),
        ChangeType::Unknown => {
            let path = if new.is_empty() { old } else { new };
            format!("change {path}")
        }
    }
}
