//! Three operations for the static page in `www/`. Each returns a JSON string:
//! `{"ok": true, "result": ...}` or `{"ok": false, "error": "...", "position": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use pcentral::chiconstruct::{build_f, starred_entries_nonzero, verify_cyclic_spectrum, TParameters};
use pcentral::exactmath::{FieldKind, Scalar};
use pcentral::harmonic::{dft_decompose, DiagonalVector};
use pcentral::imagedim::{classify_image, ImageOptions};
use pcentral::matunits::{evaluate_on_units, iota_sum, ScanOptions, UnitAssignment};
use pcentral::ncpoly::parse_auto;
use pcentral::rng::trial_rng;

/// Largest matrix size the page accepts; scans grow like n^(2m).
pub const MAX_N: usize = 4;
/// Unit scans in the browser stop here instead of at the CLI default.
pub const BROWSER_SCAN_BUDGET: u64 = 200_000;

fn fail(message: impl ToString, position: Option<usize>) -> Value {
    json!({"ok": false, "error": message.to_string(), "position": position})
}

fn check_n(n: usize) -> Result<(), Value> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(fail(format!("n must be between 1 and {MAX_N}"), None))
    }
}

pub fn classify_value(poly: &str, n: usize, seed: u64) -> Value {
    let run = || -> Result<Value, Value> {
        check_n(n)?;
        let p = parse_auto(poly).map_err(|e| fail(&e, e.position()))?;
        let opts = ImageOptions {
            trials: 4,
            seed,
            sample_box: 10,
            scan: ScanOptions {
                budget: BROWSER_SCAN_BUDGET,
                allow_sampling: false,
            },
        };
        let report = classify_image(&p, n, opts).map_err(|e| fail(e, None))?;
        Ok(json!({"ok": true, "poly": p.render(), "result": report}))
    };
    run().unwrap_or_else(|e| e)
}

/// `entries` is comma-separated elements of Q(e), e = exp(2 pi i / n).
pub fn decompose_value(n: usize, entries: &str) -> Value {
    let run = || -> Result<Value, Value> {
        if !(2..=12).contains(&n) {
            return Err(fail("n must be between 2 and 12", None));
        }
        let mut values = Vec::new();
        let mut offset = 0;
        for part in entries.split(',') {
            let s = Scalar::parse(part.trim(), FieldKind::Cyclotomic(n))
                .map_err(|e| fail(&e.message, Some(offset + e.position)))?;
            values.push(s);
            offset += part.len() + 1;
        }
        let d = DiagonalVector::new(n, values).map_err(|e| fail(e, None))?;
        let dec = dft_decompose(&d);
        let exact = dec.reconstruct() == d;
        Ok(json!({"ok": true, "result": dec, "reconstructs": exact}))
    };
    run().unwrap_or_else(|e| e)
}

/// `base` lists unit positions as "i,j;i,j;...".
pub fn chi_f_value(poly: &str, n: usize, base: &str, seed: u64) -> Value {
    let run = || -> Result<Value, Value> {
        check_n(n)?;
        let p = parse_auto(poly).map_err(|e| fail(&e, e.position()))?;
        let mut pairs = Vec::new();
        for chunk in base.split(';') {
            let ij: Vec<usize> = chunk.split(',').filter_map(|t| t.trim().parse().ok()).collect();
            match ij.as_slice() {
                [i, j] if (1..=n).contains(i) && (1..=n).contains(j) => pairs.push((*i, *j)),
                _ => return Err(fail(format!("bad unit `{chunk}`"), None)),
            }
        }
        if pairs.len() != p.num_vars() {
            return Err(fail(format!("need {} units, got {}", p.num_vars(), pairs.len()), None));
        }
        let base = UnitAssignment::from_pairs(n, &pairs);
        let value = evaluate_on_units(&p, &base).map_err(|e| fail(e, None))?;
        let mut rng = trial_rng(seed, "web-chi-f", 0);
        let t = TParameters::random(&mut rng, n, p.num_vars(), 10);
        let f = build_f(&p, &base, &t).map_err(|e| fail(e, None))?;
        let spectrum = verify_cyclic_spectrum(&f).map_err(|e| fail(e, None))?;
        Ok(json!({
            "ok": true,
            "base_value": value,
            "iota_sum_mod_n": iota_sum(&base).rem_euclid(n as i64),
            "f": f,
            "char_poly": spectrum.char_poly,
            "cyclic_spectrum": spectrum.holds,
            "starred_entries_nonzero": starred_entries_nonzero(&f),
        }))
    };
    run().unwrap_or_else(|e| e)
}

#[wasm_bindgen]
pub fn classify(poly: &str, n: usize, seed: u64) -> String {
    classify_value(poly, n, seed).to_string()
}

#[wasm_bindgen]
pub fn harmonic_decompose(n: usize, entries: &str) -> String {
    decompose_value(n, entries).to_string()
}

#[wasm_bindgen]
pub fn chi_f(poly: &str, n: usize, base: &str, seed: u64) -> String {
    chi_f_value(poly, n, base, seed).to_string()
}
