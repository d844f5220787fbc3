use elliptica::cx::is_infinite;
use elliptica::Complex64;
use serde::Serialize;

/// Parse `"re+imi"` forms: `1.5`, `-2i`, `0.5+0.5i`, `1e-3-4.2i`, `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {s:?}; expected re+imi");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// `{re, im}` in JSON, or the string `"infinity"` for the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum JsonComplex {
    Finite { re: f64, im: f64 },
    Infinite(&'static str),
}

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        if is_infinite(z) || !z.is_finite() {
            JsonComplex::Infinite("infinity")
        } else {
            JsonComplex::Finite { re: z.re, im: z.im }
        }
    }
}

pub fn j(z: Complex64) -> JsonComplex {
    z.into()
}
