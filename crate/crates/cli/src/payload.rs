use std::str::FromStr;
use twocoin::linalg::C64;
use twocoin::CoinStateSpec;

/// Deviation of the norm beyond which a coefficient list is reported as
/// renormalized.
pub const NORM_WARN_TOL: f64 = 1e-6;

/// Parses a payload: `bell`, `ghz`, `w`, `u3:θ,φ,λ` or a comma-separated
/// list of complex amplitudes (`0.5`, `-0.2i`, `0.3+0.4i`, ...). Lists are
/// normalized; the second value is a warning when that changed them by more
/// than [`NORM_WARN_TOL`].
pub fn parse_payload(text: &str) -> Result<(CoinStateSpec, Option<String>), String> {
    let t = text.trim();
    match t.to_ascii_lowercase().as_str() {
        "bell" => return Ok((CoinStateSpec::bell(), None)),
        "ghz" => return Ok((CoinStateSpec::ghz(), None)),
        "w" => return Ok((CoinStateSpec::w(), None)),
        _ => {}
    }
    if let Some(rest) = t.strip_prefix("u3:") {
        let angles = rest
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|e| format!("bad angle {a:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let [theta, phi, _lambda] = angles[..] else {
            return Err(format!("u3 needs three angles, got {}", angles.len()));
        };
        let alpha = C64::new((theta / 2.0).cos(), 0.0);
        let beta = C64::from_polar((theta / 2.0).sin(), phi);
        return CoinStateSpec::qubit(alpha, beta)
            .map(|s| (s, None))
            .map_err(|e| e.to_string());
    }
    let coefficients = t
        .split(',')
        .map(|c| {
            let c: String = c.chars().filter(|ch| !ch.is_whitespace()).collect();
            C64::from_str(&c).map_err(|_| format!("bad amplitude {c:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err("amplitudes must be finite".into());
    }
    let (spec, norm) = CoinStateSpec::normalized(coefficients).map_err(|e| e.to_string())?;
    let warning = ((norm - 1.0).abs() > NORM_WARN_TOL)
        .then(|| format!("payload {t:?} had norm {norm}; normalized"));
    Ok((spec, warning))
}

/// Payload used when none is given, by coin dimension.
pub fn default_payload(dim: usize) -> String {
    match dim {
        2 => format!("0.5,{:?}", 3f64.sqrt() / 2.0),
        4 => "bell".into(),
        8 => "ghz".into(),
        _ => std::iter::once("1")
            .chain(std::iter::repeat_n("0", dim - 1))
            .collect::<Vec<_>>()
            .join(","),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(text: &str) -> Vec<C64> {
        parse_payload(text).unwrap().0.coefficients().to_vec()
    }

    #[test]
    fn presets() {
        assert_eq!(parse_payload("bell").unwrap().0, CoinStateSpec::bell());
        assert_eq!(parse_payload("GHZ").unwrap().0, CoinStateSpec::ghz());
        assert_eq!(parse_payload("w").unwrap().0.dim(), 8);
    }

    #[test]
    fn complex_forms() {
        let c = coeffs("0.6, 0.8i");
        assert!((c[0] - C64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((c[1] - C64::new(0.0, 0.8)).norm() < 1e-15);
        let c = coeffs("0.36+0.48i,-0.48-0.64i");
        assert!((c[0] - C64::new(0.36, 0.48)).norm() < 1e-15);
        assert!((c[1] - C64::new(-0.48, -0.64)).norm() < 1e-15);
        let c = coeffs("1e-1+0i, 0.99498743710662i");
        assert!((c[0].re - 0.1).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_lists_warn() {
        let (s, w) = parse_payload("1,1").unwrap();
        assert!(w.is_some());
        assert!((s.coefficients()[0].re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(parse_payload("0.5,0.8660254037844386").unwrap().1.is_none());
    }

    #[test]
    fn u3_matches_prepared_amplitudes() {
        let c = coeffs(&format!("u3:{},0,0", 2.0 * std::f64::consts::FRAC_PI_3));
        assert!((c[0].re - 0.5).abs() < 1e-12);
        assert!((c[1].re - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(parse_payload("0,0").is_err());
        assert!(parse_payload("abc").is_err());
        assert!(parse_payload("u3:1,2").is_err());
    }

    #[test]
    fn defaults_parse() {
        for d in [2, 3, 4, 8] {
            assert_eq!(parse_payload(&default_payload(d)).unwrap().0.dim(), d);
        }
    }
}
