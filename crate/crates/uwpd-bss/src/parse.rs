//! Parsers for command-line values.

use uwpd_bss_core::MixingMatrix;

/// `a11,a12,a21,a22`, row-major.
pub fn parse_matrix(s: &str) -> Result<MixingMatrix, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("matrix entry {t:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    if v.len() != 4 {
        return Err(format!(
            "matrix needs 4 entries a11,a12,a21,a22, got {}",
            v.len()
        ));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("matrix entries must be finite".into());
    }
    MixingMatrix::new([[v[0], v[1]], [v[2], v[3]]]).map_err(|e| e.to_string())
}

/// Comma-separated lags and inclusive ranges, e.g. `1-20` or `1,2,5-8`.
pub fn parse_lags(s: &str) -> Result<Vec<usize>, String> {
    let mut lags = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("lag {t:?}: {e}"))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("lag range {part:?} is empty"));
                }
                lags.extend(a..=b);
            }
            None => lags.push(num(part)?),
        }
    }
    if lags.contains(&0) {
        return Err("lags must be positive".into());
    }
    lags.sort_unstable();
    lags.dedup();
    Ok(lags)
}
