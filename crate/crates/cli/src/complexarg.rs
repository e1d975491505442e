//! Complex amplitudes from the command line: `0.6`, `0.6+0.8j`, `-0.5j`,
//! or probability-plus-phase as `prob:0.36,phase:1.57`.

use num_complex::Complex64 as C64;

pub fn parse_complex(input: &str) -> Result<C64, String> {
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err("empty amplitude".into());
    }

    if let Some(rest) = text.strip_prefix("prob:") {
        let (p_str, phase) = match rest.split_once(",phase:") {
            Some((p, ph)) => (p, ph.parse::<f64>().map_err(|e| format!("bad phase: {e}"))?),
            None => (rest, 0.0),
        };
        let p: f64 = p_str.parse().map_err(|e| format!("bad probability: {e}"))?;
        if !(0.0..=1.0 + 1e-12).contains(&p) {
            return Err(format!("probability {p} outside [0, 1]"));
        }
        return Ok(C64::from_polar(p.sqrt(), phase));
    }

    let text = text.replace('i', "j");
    if let Some(body) = text.strip_suffix('j') {
        // the imaginary term starts at the last sign that is not an
        // exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in 1..bytes.len() {
            if (bytes[idx] == b'+' || bytes[idx] == b'-')
                && bytes[idx - 1] != b'e'
                && bytes[idx - 1] != b'E'
            {
                split = Some(idx);
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            re_str.parse().map_err(|e| format!("bad real part: {e}"))?
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            s => s.parse().map_err(|e| format!("bad imaginary part: {e}"))?,
        };
        return Ok(C64::new(re, im));
    }

    let re: f64 = text.parse().map_err(|e| format!("bad amplitude {input:?}: {e}"))?;
    Ok(C64::new(re, 0.0))
}

/// Comma-separated list of complex amplitudes.
pub fn parse_complex_list(input: &str) -> Result<Vec<C64>, String> {
    input.split(',').map(parse_complex).collect()
}
