use std::io::Write;

/// Prints a response body: verbatim with `raw`, otherwise re-indented with
/// key order kept. Bodies that are not JSON are printed as they are.
pub fn emit(body: &str, raw: bool) {
    let text = if raw {
        body.to_owned()
    } else {
        pretty(body).unwrap_or_else(|| body.to_owned())
    };
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{text}");
    let _ = stdout.flush();
}

pub fn pretty(body: &str) -> Option<String> {
    let mut out = Vec::with_capacity(body.len() * 2);
    let mut deserializer = serde_json::Deserializer::from_str(body);
    let mut serializer = serde_json::Serializer::pretty(&mut out);
    serde_transcode::transcode(&mut deserializer, &mut serializer).ok()?;
    deserializer.end().ok()?;
    String::from_utf8(out).ok()
}

/// 0 for an envelope without errors, 1 if it carries any, 2 if the body is
/// not an envelope at all.
pub fn envelope_exit_code(body: &str) -> i32 {
    match serde_json::from_str::<serde_json::Value>(body) {
        Ok(value) => match value.get("errors").and_then(|e| e.as_array()) {
            Some(errors) if errors.is_empty() => crate::EXIT_CLEAN,
            Some(_) => crate::EXIT_PARTIAL,
            None => crate::EXIT_FAILURE,
        },
        Err(_) => crate::EXIT_FAILURE,
    }
}
