//! Run configuration: documented defaults (m = ω = ħ = 1, λ = 0.1,
//! N = 4000), a flat key=value config file with a JSON alternative, and
//! flag overrides. Unknown keys and unknown tolerance names are rejected
//! with positional diagnostics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nlho::params::OscillatorParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: OscillatorParams,
    /// Grid points; commands apply their own documented default when unset.
    pub grid_n: Option<usize>,
    /// Half-width of the grid box; unset means the λ-aware library default.
    pub grid_l: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tol.get(name).copied().unwrap_or(default)
    }
}

/// Raw option layer: file values first, flags override.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub lambda: Option<f64>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub hbar: Option<f64>,
    pub grid_n: Option<usize>,
    pub grid_l: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub tol: BTreeMap<String, f64>,
}

const TOL_NAMES: [&str; 4] = ["classical", "coherent", "spectrum", "wavefunction"];

impl RawConfig {
    /// Overlay `over` (typically command-line flags) on top of `self`.
    pub fn merged_with(mut self, over: RawConfig) -> RawConfig {
        self.lambda = over.lambda.or(self.lambda);
        self.mass = over.mass.or(self.mass);
        self.omega = over.omega.or(self.omega);
        self.hbar = over.hbar.or(self.hbar);
        self.grid_n = over.grid_n.or(self.grid_n);
        self.grid_l = over.grid_l.or(self.grid_l);
        self.format = over.format.or(self.format);
        self.out = over.out.or(self.out);
        self.tol.extend(over.tol);
        self
    }

    pub fn resolve(self) -> Result<RunConfig, String> {
        let params = OscillatorParams::new(
            self.mass.unwrap_or(1.0),
            self.omega.unwrap_or(1.0),
            self.lambda.unwrap_or(0.1),
            self.hbar.unwrap_or(1.0),
        )
        .map_err(|e| e.to_string())?;
        Ok(RunConfig {
            params,
            grid_n: self.grid_n,
            grid_l: self.grid_l,
            format: self.format.unwrap_or(Format::Csv),
            out: self.out,
            tol: self.tol,
        })
    }
}

pub fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(format!("unknown format '{other}' (expected csv or json)")),
    }
}

fn check_tol_name(name: &str, at: &str) -> Result<(), String> {
    if TOL_NAMES.contains(&name) {
        Ok(())
    } else {
        let mut known = String::new();
        for (i, n) in TOL_NAMES.iter().enumerate() {
            let _ = write!(known, "{}{n}", if i == 0 { "" } else { ", " });
        }
        Err(format!("{at}: unknown tolerance '{name}' (known: {known})"))
    }
}

/// Parse a `--tol NAME=F` occurrence.
pub fn parse_tol_flag(spec: &str) -> Result<(String, f64), String> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| format!("--tol expects NAME=F, got '{spec}'"))?;
    check_tol_name(name, "--tol")?;
    let v: f64 = value
        .parse()
        .map_err(|_| format!("--tol {name}: '{value}' is not a number"))?;
    Ok((name.to_string(), v))
}

/// Parse a config file; a leading `{` selects the JSON form, anything else
/// the flat key=value form.
pub fn parse_file(path: &Path) -> Result<RawConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let name = path.display().to_string();
    if text.trim_start().starts_with('{') {
        parse_json(&name, &text)
    } else {
        parse_flat(&name, &text)
    }
}

fn parse_flat(name: &str, text: &str) -> Result<RawConfig, String> {
    let mut raw = RawConfig::default();
    for (idx, line) in text.lines().enumerate() {
        let at = format!("{name}:{}", idx + 1);
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{at}: expected key=value, got '{line}'"))?;
        let (key, value) = (key.trim(), value.trim());
        let float = || -> Result<f64, String> {
            value
                .parse()
                .map_err(|_| format!("{at}: '{value}' is not a number"))
        };
        match key {
            "lambda" => raw.lambda = Some(float()?),
            "mass" => raw.mass = Some(float()?),
            "omega" => raw.omega = Some(float()?),
            "hbar" => raw.hbar = Some(float()?),
            "grid_n" => {
                raw.grid_n = Some(value.parse().map_err(|_| {
                    format!("{at}: '{value}' is not a positive integer")
                })?)
            }
            "grid_l" => raw.grid_l = Some(float()?),
            "format" => raw.format = Some(parse_format(value).map_err(|e| format!("{at}: {e}"))?),
            "out" => raw.out = Some(PathBuf::from(value)),
            _ => {
                if let Some(tol_name) = key.strip_prefix("tol.") {
                    check_tol_name(tol_name, &at)?;
                    raw.tol.insert(tol_name.to_string(), float()?);
                } else {
                    return Err(format!("{at}: unknown key '{key}'"));
                }
            }
        }
    }
    Ok(raw)
}

fn parse_json(name: &str, text: &str) -> Result<RawConfig, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("{name}: {e}"))?;
    let obj = value
        .as_object()
        .ok_or_else(|| format!("{name}: top level must be an object"))?;
    let mut raw = RawConfig::default();
    for (key, v) in obj {
        let float = || -> Result<f64, String> {
            v.as_f64()
                .ok_or_else(|| format!("{name}: key '{key}' must be a number"))
        };
        match key.as_str() {
            "lambda" => raw.lambda = Some(float()?),
            "mass" => raw.mass = Some(float()?),
            "omega" => raw.omega = Some(float()?),
            "hbar" => raw.hbar = Some(float()?),
            "grid_n" => {
                raw.grid_n = Some(v.as_u64().ok_or_else(|| {
                    format!("{name}: key 'grid_n' must be a positive integer")
                })? as usize)
            }
            "grid_l" => raw.grid_l = Some(float()?),
            "format" => {
                let s = v
                    .as_str()
                    .ok_or_else(|| format!("{name}: key 'format' must be a string"))?;
                raw.format = Some(parse_format(s).map_err(|e| format!("{name}: {e}"))?);
            }
            "out" => {
                let s = v
                    .as_str()
                    .ok_or_else(|| format!("{name}: key 'out' must be a string"))?;
                raw.out = Some(PathBuf::from(s));
            }
            "tol" => {
                let map = v
                    .as_object()
                    .ok_or_else(|| format!("{name}: key 'tol' must be an object"))?;
                for (tn, tv) in map {
                    check_tol_name(tn, name)?;
                    let t = tv
                        .as_f64()
                        .ok_or_else(|| format!("{name}: tolerance '{tn}' must be a number"))?;
                    raw.tol.insert(tn.clone(), t);
                }
            }
            _ => return Err(format!("{name}: unknown key '{key}'")),
        }
    }
    Ok(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let cfg = RawConfig::default().resolve().unwrap();
        assert_eq!(cfg.params.lambda, 0.1);
        assert_eq!(cfg.params.m, 1.0);
        assert_eq!(cfg.grid_n, None);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.tolerance("spectrum", 1e-6), 1e-6);
    }

    #[test]
    fn flat_file_round_trip() {
        let raw = parse_flat(
            "c.cfg",
            "# comment\nlambda = 0.5\ngrid_n=200\ntol.spectrum = 1e-3\nformat=json\n",
        )
        .unwrap();
        assert_eq!(raw.lambda, Some(0.5));
        assert_eq!(raw.grid_n, Some(200));
        assert_eq!(raw.tol["spectrum"], 1e-3);
        assert_eq!(raw.format, Some(Format::Json));
    }

    #[test]
    fn flat_file_diagnostics_carry_line_numbers() {
        let err = parse_flat("c.cfg", "lambda = 0.5\nbogus = 1\n").unwrap_err();
        assert!(err.contains("c.cfg:2") && err.contains("bogus"), "{err}");
        let err = parse_flat("c.cfg", "lambda == x\n").unwrap_err();
        assert!(err.contains("c.cfg:1"), "{err}");
        let err = parse_flat("c.cfg", "tol.banana = 1\n").unwrap_err();
        assert!(err.contains("banana"), "{err}");
    }

    #[test]
    fn json_file_parses_and_rejects_unknown_keys() {
        let raw = parse_json(
            "c.json",
            r#"{"lambda": 0.2, "grid_n": 300, "tol": {"classical": 1e-4}}"#,
        )
        .unwrap();
        assert_eq!(raw.lambda, Some(0.2));
        assert_eq!(raw.grid_n, Some(300));
        assert_eq!(raw.tol["classical"], 1e-4);
        let err = parse_json("c.json", r#"{"lambdaa": 0.2}"#).unwrap_err();
        assert!(err.contains("lambdaa"), "{err}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_json("c.json", "{\n  \"lambda\": ,\n}").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn flags_override_file_values() {
        let file = parse_flat("c.cfg", "lambda=0.5\nmass=2\n").unwrap();
        let flags = RawConfig { lambda: Some(0.7), ..Default::default() };
        let cfg = file.merged_with(flags).resolve().unwrap();
        assert_eq!(cfg.params.lambda, 0.7);
        assert_eq!(cfg.params.m, 2.0);
    }

    #[test]
    fn tol_flag_parsing() {
        let (name, v) = parse_tol_flag("spectrum=1e-5").unwrap();
        assert_eq!((name.as_str(), v), ("spectrum", 1e-5));
        assert!(parse_tol_flag("spectrum").is_err());
        assert!(parse_tol_flag("banana=1").is_err());
        assert!(parse_tol_flag("spectrum=x").is_err());
    }

    #[test]
    fn invalid_physics_is_a_config_error() {
        let raw = RawConfig { mass: Some(-1.0), ..Default::default() };
        assert!(raw.resolve().is_err());
    }
}
