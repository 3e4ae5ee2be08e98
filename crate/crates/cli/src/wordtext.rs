//! Word text syntax: comma-separated letters with `^-1` marking inverses,
//! a `band:` prefix for periodic words, and `triv:v` for trivial words.

use gentle_core::quiver::Quiver;
use gentle_core::words::{Letter, Word};

pub fn parse_word(q: &Quiver, text: &str) -> Result<Word, String> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("triv:") {
        let v = q
            .vertex_id(rest.trim())
            .ok_or_else(|| format!("unknown vertex `{}`", rest.trim()))?;
        return Ok(Word::trivial(v, 1).expect("sign is +1"));
    }
    let (band, body) = match text.strip_prefix("band:") {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let mut letters = Vec::new();
    for token in body.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err("empty letter".to_string());
        }
        let (name, direct) = match token.strip_suffix("^-1") {
            Some(base) => (base, false),
            None => (token, true),
        };
        let arrow = q
            .arrow_id(name)
            .ok_or_else(|| format!("unknown arrow `{name}`"))?;
        letters.push(Letter { arrow, direct });
    }
    let word = if band {
        Word::band(q, letters)
    } else {
        Word::finite(q, letters)
    };
    word.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gentle_core::fixtures::running_example;

    #[test]
    fn parses_and_displays_words() {
        let pair = running_example();
        let q = pair.quiver();
        for text in ["nu,zeta^-1", "band:nu,beta,alpha", "triv:2"] {
            let w = parse_word(q, text).unwrap();
            assert_eq!(w.display(q), text);
        }
        assert!(parse_word(q, "nope").is_err());
        assert!(parse_word(q, "alpha,beta").is_err());
        assert!(parse_word(q, "triv:99").is_err());
    }
}
