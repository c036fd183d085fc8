//! Parsers for command-line values: complex numbers, polynomials and
//! JSON descriptors given inline or as `@path`.

use num_complex::Complex64;
use schwarzian_lab::automorphic::GroupSpec;
use schwarzian_lab::integral_ops::DensityFn;
use schwarzian_lab::maps::{self, AnalyticFn};

/// `re`, `re,im` or `re+imi`/`re-imi`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if let Some((re, im)) = s.split_once(',') {
        let re = re.trim().parse::<f64>().map_err(|e| format!("bad real part '{re}': {e}"))?;
        let im = im.trim().parse::<f64>().map_err(|e| format!("bad imaginary part '{im}': {e}"))?;
        return Ok(Complex64::new(re, im));
    }
    s.parse::<Complex64>()
        .map_err(|_| format!("cannot parse complex number '{s}' (use re,im)"))
}

/// Coefficients low to high: `1,0.5,0.25` (real) or `[[1,0],[0.5,-1]]`.
pub fn polynomial(s: &str) -> Result<Vec<Complex64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.starts_with('[') {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(s).map_err(|e| format!("bad coefficient list: {e}"))?;
        return Ok(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map(|x| Complex64::new(x, 0.0))
                .map_err(|e| format!("bad coefficient '{t}': {e}"))
        })
        .collect()
}

fn json_source(s: &str) -> Result<String, String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
        None => Ok(s.to_string()),
    }
}

/// Catalog name, inline JSON or `@file.json`.
pub fn function(s: &str) -> Result<AnalyticFn, String> {
    if s.starts_with('{') || s.starts_with('@') {
        let text = json_source(s)?;
        return AnalyticFn::from_json(&text).map_err(|e| format!("bad function descriptor: {e}"));
    }
    maps::catalog(s).map_err(|e| e.to_string())
}

/// `zero`, `aw:<poly>`, `angular:<m>`, inline JSON or `@file.json`.
pub fn density(s: &str) -> Result<DensityFn, String> {
    if s == "zero" {
        return Ok(DensityFn::Zero);
    }
    if let Some(p) = s.strip_prefix("aw:") {
        return Ok(DensityFn::ahlfors_weill_polynomial(&polynomial(p)?));
    }
    if let Some(m) = s.strip_prefix("angular:") {
        let m = m.parse::<i32>().map_err(|e| format!("bad angular mode '{m}': {e}"))?;
        return Ok(DensityFn::Angular { m, amp: [1.0, 0.0] });
    }
    let text = json_source(s)?;
    serde_json::from_str(&text).map_err(|e| format!("bad density descriptor: {e}"))
}

/// Inline JSON or `@file.json`, e.g. `{"kind":"cyclic","fixpoints":[0.3,2.5],"multiplier":3}`.
pub fn group(s: &str) -> Result<GroupSpec, String> {
    let text = json_source(s)?;
    serde_json::from_str(&text).map_err(|e| format!("bad group descriptor: {e}"))
}
