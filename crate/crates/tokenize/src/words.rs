use crate::error::TokenizeError;

/// Split text on whitespace runs. Never yields empty tokens.
pub fn word_tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// First `floor(ratio × char_count)` characters of `message`.
///
/// Whitespace counts toward the budget. The product is snapped to the
/// nearest integer when within 1e-9 before flooring so that mathematically
/// exact cuts (0.25 of 8 chars) are not lost to float rounding.
pub fn take_char_prefix(message: &str, ratio: f64) -> Result<&str, TokenizeError> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(TokenizeError::RatioOutOfRange(ratio));
    }
    let total = message.chars().count();
    let cut = ratio * total as f64;
    let keep = if (cut - cut.round()).abs() < 1e-9 {
        cut.round() as usize
    } else {
        cut.floor() as usize
    };
    let end = message
        .char_indices()
        .nth(keep)
        .map_or(message.len(), |(i, _)| i);
    Ok(&message[..end])
}

/// A typed prefix decomposed around its trailing incomplete word.
///
/// `complete_part + separator + dangling` reconstructs the original prefix
/// character-exact; `separator` is the whitespace run between the two parts
/// (or the trailing whitespace when nothing dangles).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSplit {
    pub complete_part: String,
    pub separator: String,
    pub dangling: String,
}

impl PrefixSplit {
    pub fn reconstruct(&self) -> String {
        format!("{}{}{}", self.complete_part, self.separator, self.dangling)
    }
}

/// Split a typed prefix into whole words and the trailing incomplete word.
///
/// A prefix ending in whitespace has nothing dangling: the user finished the
/// last word. Otherwise the maximal trailing non-whitespace run dangles.
pub fn split_dangling(prefix: &str) -> PrefixSplit {
    let mut dangling_start = prefix.len();
    for (i, c) in prefix.char_indices().rev() {
        if c.is_whitespace() {
            break;
        }
        dangling_start = i;
    }
    let (before, dangling) = prefix.split_at(dangling_start);
    let complete_len = before.trim_end().len();
    PrefixSplit {
        complete_part: before[..complete_len].to_string(),
        separator: before[complete_len..].to_string(),
        dangling: dangling.to_string(),
    }
}
